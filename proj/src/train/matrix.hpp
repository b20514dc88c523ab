/* Copyright 2026 The mtlqa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus/dataset.hpp"
#include "corpus/templates.hpp"
#include "train/trainer.hpp"

namespace mtlqa::train {

struct MatrixConfig {
  std::vector<std::uint64_t> seeds{1, 2, 3};
  text::Vocab vocab;
  model::ModelConfig model;  // vocab_size and vocab_digest are taken from `vocab`
  TrainConfig train;
  double train_frac = 0.7;
  std::array<double, 3> note_ratios{0.7, 0.15, 0.15};
  std::size_t max_seq_len = text::kSentenceSeqLen;
};

struct MatrixCell {
  std::string system;
  std::string split;  // split the model was trained on; every cell is scored on the pl test set
  std::vector<double> f1;
  std::vector<double> em;
};

struct MatrixResult {
  std::vector<MatrixCell> rows;
  nlohmann::json to_json() const;
  std::string csv() const;
  std::string text() const;
  const MatrixCell& row(const std::string& system, const std::string& split) const;
};

double mean_of(const std::vector<double>& v);
// Sample standard deviation; 0 for fewer than two values.
double sd_of(const std::vector<double>& v);

// Trains baseline, fused and multitask models on the pl split and a fused model
// on the r split for every seed, scoring all four on the pl test set.
MatrixResult run_matrix(const std::vector<corpus::QAExample>& examples,
                        const std::vector<corpus::QuestionTemplate>& templates, const MatrixConfig& config,
                        const std::function<void(const std::string&)>& progress = {});

}  // namespace mtlqa::train
