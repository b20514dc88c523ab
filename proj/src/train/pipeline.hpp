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

#include <memory>
#include <string>

#include <json.hpp>

#include "common/settings.hpp"
#include "model/model.hpp"
#include "text/entities.hpp"
#include "text/vocab.hpp"

namespace mtlqa::pipeline {

// File names inside a data directory written by gen_data.
inline constexpr const char* kExamplesFile = "examples.jsonl";
inline constexpr const char* kNotesFile = "notes.jsonl";
inline constexpr const char* kGazetteerFile = "gazetteer.json";
inline constexpr const char* kVocabFile = "vocab.txt";
inline constexpr const char* kCorpusInfoFile = "corpus.json";

// File names inside a model directory written by train.
inline constexpr const char* kCheckpointFile = "model.ckpt";
inline constexpr const char* kModelConfigFile = "model_config.json";
inline constexpr const char* kTrainLogFile = "train_log.jsonl";

// Rejects keys outside the sections a command understands.
void require_sections(const Settings& s, const std::vector<std::string>& sections);

nlohmann::json gen_data(const Settings& settings, const std::string& out_dir);
nlohmann::json split(const Settings& settings, const std::string& data_dir, const std::string& out_dir);
nlohmann::json train(const Settings& settings, const std::string& data_dir, const std::string& split_path,
                     const std::string& out_dir);
nlohmann::json eval(const std::string& model_dir, const std::string& data_dir, const std::string& split_path,
                    const std::string& split_name);
nlohmann::json gradcheck(const Settings& settings);
nlohmann::json run_matrix(const Settings& settings, const std::string& data_dir, const std::string& out_dir);

struct LoadedModel {
  std::unique_ptr<model::Model> model;
  text::Vocab vocab;
  text::Gazetteer gazetteer;
  std::size_t max_seq_len = 0;
  std::size_t negatives = 0;
  std::uint64_t pair_seed = 0;
  nlohmann::json config_json;
};

// Loads a model directory written by train; IntegrityError on any mismatch.
LoadedModel load_model(const std::string& model_dir);

// Answers one question against one context with a span-mode model.
nlohmann::json answer(const LoadedModel& m, const std::string& question, const std::string& context);

}  // namespace mtlqa::pipeline
