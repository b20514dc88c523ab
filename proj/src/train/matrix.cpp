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

#include "train/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "common/error.hpp"
#include "split/splitter.hpp"

namespace mtlqa::train {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

nlohmann::json MatrixResult::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"system", r.system},
                         {"split", r.split},
                         {"f1", r.f1},
                         {"em", r.em},
                         {"f1_mean", mean_of(r.f1)},
                         {"f1_sd", sd_of(r.f1)},
                         {"em_mean", mean_of(r.em)},
                         {"em_sd", sd_of(r.em)}});
  }
  return {{"rows", rows_json}};
}

std::string MatrixResult::csv() const {
  std::ostringstream os;
  os << "system,split,f1_mean,f1_sd,em_mean,em_sd,seeds\n";
  for (const auto& r : rows) {
    os << r.system << ',' << r.split << ',' << mean_of(r.f1) << ',' << sd_of(r.f1) << ',' << mean_of(r.em) << ','
       << sd_of(r.em) << ',' << r.f1.size() << '\n';
  }
  return os.str();
}

std::string MatrixResult::text() const {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %-5s %16s %16s\n", "system", "split", "F1", "EM");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %-5s %8.2f +- %5.2f %8.2f +- %5.2f\n", r.system.c_str(), r.split.c_str(),
                  100 * mean_of(r.f1), 100 * sd_of(r.f1), 100 * mean_of(r.em), 100 * sd_of(r.em));
    os << buf;
  }
  return os.str();
}

const MatrixCell& MatrixResult::row(const std::string& system, const std::string& split) const {
  for (const auto& r : rows) {
    if (r.system == system && r.split == split) return r;
  }
  throw IndexError("no matrix row " + system + "/" + split);
}

MatrixResult run_matrix(const std::vector<corpus::QAExample>& examples,
                        const std::vector<corpus::QuestionTemplate>& templates, const MatrixConfig& config,
                        const std::function<void(const std::string&)>& progress) {
  if (config.seeds.size() < 3) throw ConfigError("run_matrix needs at least three seeds");
  model::ModelConfig base = config.model;
  base.vocab_size = config.vocab.size();
  base.vocab_digest = config.vocab.digest();
  base.max_positions = std::max(base.max_positions, config.max_seq_len);

  struct Plan {
    System system;
    split::SplitMode mode;
  };
  const std::vector<Plan> plans{{System::kBaseline, split::SplitMode::kParaphrase},
                                {System::kFused, split::SplitMode::kParaphrase},
                                {System::kMultitask, split::SplitMode::kParaphrase},
                                {System::kFused, split::SplitMode::kRandom}};
  MatrixResult result;
  for (const auto& p : plans) result.rows.push_back({system_name(p.system), split::mode_name(p.mode), {}, {}});

  for (std::uint64_t seed : config.seeds) {
    EncodedSet train_sets[2], val_sets[2];
    EncodedSet test;
    for (auto mode : {split::SplitMode::kParaphrase, split::SplitMode::kRandom}) {
      const auto assignment =
          split::make_assignment(examples, templates, mode, config.train_frac, seed, config.note_ratios);
      const auto sets = split::filter_examples(examples, assignment);
      const std::size_t k = mode == split::SplitMode::kRandom ? 1 : 0;
      train_sets[k] = encode_examples(sets.train, config.vocab, config.max_seq_len);
      val_sets[k] = encode_examples(sets.val, config.vocab, config.max_seq_len);
      if (k == 0) test = encode_examples(sets.test, config.vocab, config.max_seq_len);
    }
    for (std::size_t i = 0; i < plans.size(); ++i) {
      const auto& plan = plans[i];
      const std::size_t k = plan.mode == split::SplitMode::kRandom ? 1 : 0;
      auto mc = configure_for_system(base, plan.system);
      mc.init_seed = seed;
      auto tc = config.train;
      tc.seed = seed;
      tc.system = plan.system;
      const auto trained = train(train_sets[k], val_sets[k], mc, tc);
      const auto report = evaluate(trained.model, test);
      result.rows[i].f1.push_back(report.token_f1.value_or(0.0));
      result.rows[i].em.push_back(report.em.value_or(0.0));
      if (progress) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "seed %llu %s/%s: F1 %.4f EM %.4f (%zu steps, best at %zu)",
                      static_cast<unsigned long long>(seed), result.rows[i].system.c_str(),
                      result.rows[i].split.c_str(), *report.token_f1, *report.em, trained.steps, trained.best_step);
        progress(buf);
      }
    }
  }
  return result;
}

}  // namespace mtlqa::train
