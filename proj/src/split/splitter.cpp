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

#include "split/splitter.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace mtlqa::split {

SplitMode parse_mode(const std::string& s) {
  if (s == "pl") return SplitMode::kParaphrase;
  if (s == "r") return SplitMode::kRandom;
  throw ConfigError("unknown split mode '" + s + "' (expected pl or r)");
}

const char* mode_name(SplitMode m) { return m == SplitMode::kParaphrase ? "pl" : "r"; }

nlohmann::json assignment_to_json(const SplitAssignment& a) {
  nlohmann::json tpl = nlohmann::json::object();
  for (const auto& [lf, part] : a.templates) {
    tpl[std::to_string(lf)] = {{"train", part.train}, {"eval", part.eval}};
  }
  return {{"mode", mode_name(a.mode)},
          {"seed", a.seed},
          {"train_frac", a.train_frac},
          {"notes", {{"train", a.notes.train}, {"val", a.notes.val}, {"test", a.notes.test}}},
          {"templates", tpl}};
}

SplitAssignment assignment_from_json(const nlohmann::json& j) {
  try {
    SplitAssignment a;
    a.mode = parse_mode(j.at("mode").get<std::string>());
    a.seed = j.at("seed").get<std::uint64_t>();
    a.train_frac = j.at("train_frac").get<double>();
    const auto& n = j.at("notes");
    a.notes.train = n.at("train").get<std::vector<int>>();
    a.notes.val = n.at("val").get<std::vector<int>>();
    a.notes.test = n.at("test").get<std::vector<int>>();
    for (auto it = j.at("templates").begin(); it != j.at("templates").end(); ++it) {
      TemplatePartition p;
      p.train = it.value().at("train").get<std::vector<int>>();
      p.eval = it.value().at("eval").get<std::vector<int>>();
      a.templates[std::stoi(it.key())] = std::move(p);
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed split manifest: ") + e.what());
  }
}

NotePartition split_notes(const std::vector<int>& note_ids, const std::array<double, 3>& ratios, std::uint64_t seed) {
  double total = 0.0;
  for (double r : ratios) {
    if (r < 0.0) throw ConfigError("split ratios must be non-negative");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
  std::size_t nonzero = 0;
  for (double r : ratios) nonzero += r > 0.0;
  if (note_ids.size() < nonzero) {
    throw ConfigError("cannot split " + std::to_string(note_ids.size()) + " notes into " + std::to_string(nonzero) +
                      " non-empty sets");
  }

  std::vector<int> ids = note_ids;
  std::sort(ids.begin(), ids.end());
  Rng rng(derive_seed(seed, 0x5b1173));
  rng.shuffle(ids);

  const double n = static_cast<double>(ids.size());
  auto n_train = static_cast<std::size_t>(std::llround(ratios[0] * n));
  auto n_val = static_cast<std::size_t>(std::llround(ratios[1] * n));
  n_train = std::min(n_train, ids.size());
  n_val = std::min(n_val, ids.size() - n_train);

  NotePartition p;
  p.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  p.val.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
               ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  p.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
  return p;
}

std::map<int, TemplatePartition> partition_templates(const std::map<int, std::vector<int>>& templates_by_lf,
                                                     double train_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw ConfigError("train_frac must lie in (0, 1)");
  std::map<int, TemplatePartition> out;
  for (const auto& [lf, ids] : templates_by_lf) {
    std::vector<int> shuffled = ids;
    std::sort(shuffled.begin(), shuffled.end());
    Rng rng(derive_seed(seed, 0x7e3a0000ULL + static_cast<std::uint64_t>(lf)));
    rng.shuffle(shuffled);
    const std::size_t n = shuffled.size();
    auto k = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(n) + 1e-9));
    if (n >= 2) k = std::clamp<std::size_t>(k, 1, n - 1);
    else k = n;
    TemplatePartition p;
    p.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(k));
    p.eval.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(k), shuffled.end());
    std::sort(p.train.begin(), p.train.end());
    std::sort(p.eval.begin(), p.eval.end());
    out[lf] = std::move(p);
  }
  return out;
}

std::map<int, std::vector<int>> group_templates(const std::vector<corpus::QuestionTemplate>& templates) {
  std::map<int, std::vector<int>> by_lf;
  for (const auto& t : templates) by_lf[t.lf_id].push_back(t.template_id);
  return by_lf;
}

ExampleSets filter_examples(const std::vector<corpus::QAExample>& examples, const SplitAssignment& assignment) {
  enum class Side { kTrain, kEval };
  std::map<int, Side> template_side;
  for (const auto& [lf, part] : assignment.templates) {
    for (int t : part.train) template_side[t] = Side::kTrain;
    for (int t : part.eval) template_side[t] = Side::kEval;
  }
  const std::set<int> train_notes(assignment.notes.train.begin(), assignment.notes.train.end());
  const std::set<int> val_notes(assignment.notes.val.begin(), assignment.notes.val.end());
  const std::set<int> test_notes(assignment.notes.test.begin(), assignment.notes.test.end());
  const bool pl = assignment.mode == SplitMode::kParaphrase;

  ExampleSets sets;
  for (const auto& ex : examples) {
    auto side = template_side.find(ex.question_template_id);
    if (side == template_side.end()) {
      throw DataError("example " + ex.id + " uses unknown question template " +
                      std::to_string(ex.question_template_id));
    }
    if (train_notes.count(ex.note_id)) {
      if (!pl || side->second == Side::kTrain) sets.train.push_back(ex);
    } else if (val_notes.count(ex.note_id)) {
      if (!pl || side->second == Side::kEval) sets.val.push_back(ex);
    } else if (test_notes.count(ex.note_id)) {
      if (!pl || side->second == Side::kEval) sets.test.push_back(ex);
    }
  }
  return sets;
}

LeakageAudit audit(const ExampleSets& sets) {
  std::set<int> train_tpl, eval_tpl;
  std::set<int> train_notes, val_notes, test_notes;
  for (const auto& ex : sets.train) {
    train_tpl.insert(ex.question_template_id);
    train_notes.insert(ex.note_id);
  }
  for (const auto& ex : sets.val) {
    eval_tpl.insert(ex.question_template_id);
    val_notes.insert(ex.note_id);
  }
  for (const auto& ex : sets.test) {
    eval_tpl.insert(ex.question_template_id);
    test_notes.insert(ex.note_id);
  }
  LeakageAudit a;
  for (int t : train_tpl) a.template_overlap += eval_tpl.count(t);
  for (int n : train_notes) a.note_overlap += val_notes.count(n) + test_notes.count(n);
  for (int n : val_notes) a.note_overlap += test_notes.count(n);
  return a;
}

SplitAssignment make_assignment(const std::vector<corpus::QAExample>& examples,
                                const std::vector<corpus::QuestionTemplate>& templates, SplitMode mode,
                                double train_frac, std::uint64_t seed, const std::array<double, 3>& note_ratios) {
  std::set<int> ids;
  for (const auto& ex : examples) ids.insert(ex.note_id);
  SplitAssignment a;
  a.mode = mode;
  a.seed = seed;
  a.train_frac = train_frac;
  a.notes = split_notes(std::vector<int>(ids.begin(), ids.end()), note_ratios, seed);
  a.templates = partition_templates(group_templates(templates), train_frac, seed);
  return a;
}

}  // namespace mtlqa::split
