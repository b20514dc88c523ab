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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpus/logical_form.hpp"

namespace mtlqa::metrics {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Lowercase, drop punctuation and the articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view s);

int span_em(std::string_view pred, std::string_view gold);
double token_f1(std::string_view pred, std::string_view gold);
PRF token_prf(std::string_view pred, std::string_view gold);

struct ClassScores {
  PRF weighted;  // per-class scores averaged with gold-support weights
  PRF macro;     // unweighted mean over classes seen in golds or predictions
  double accuracy = 0.0;
  std::map<int, PRF> per_class;
  std::map<int, std::size_t> support;
  std::vector<std::vector<std::size_t>> confusion;  // [gold][pred]
};

// Classes must lie in [0, num_classes). Empty input is an error.
ClassScores lf_exact_scores(const std::vector<int>& preds, const std::vector<int>& golds, int num_classes);

// Per-example multiset token P/R/F1 between predicted and gold logical forms,
// averaged over examples.
PRF lf_relaxed_scores(const std::vector<int>& preds, const std::vector<int>& golds,
                      const std::vector<corpus::LogicalForm>& inventory);

// Multiset overlap P/R/F1 of two token bags.
PRF bag_prf(const std::vector<std::string>& pred, const std::vector<std::string>& gold);

// Binary labels in {0, 1}; support-weighted over the two classes.
ClassScores evidence_scores(const std::vector<int>& preds, const std::vector<int>& golds);

struct EvalReport {
  std::size_t n_examples = 0;
  std::optional<double> em;
  std::optional<double> token_f1;
  std::optional<ClassScores> lf_exact;
  std::optional<PRF> lf_relaxed;
  std::optional<ClassScores> evidence;
  std::map<int, std::pair<double, double>> per_lf_em_f1;  // span EM/F1 grouped by gold LF
};

nlohmann::json prf_to_json(const PRF& p);
nlohmann::json report_to_json(const EvalReport& r);
std::string confusion_csv(const ClassScores& s);

}  // namespace mtlqa::metrics
