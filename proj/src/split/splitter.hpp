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
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus/dataset.hpp"
#include "corpus/templates.hpp"

namespace mtlqa::split {

enum class SplitMode { kParaphrase, kRandom };  // "pl" | "r"

SplitMode parse_mode(const std::string& s);
const char* mode_name(SplitMode m);

struct NotePartition {
  std::vector<int> train, val, test;
};

struct TemplatePartition {
  std::vector<int> train;  // QT_tr
  std::vector<int> eval;   // QT_v/t, shared by val and test
};

struct SplitAssignment {
  SplitMode mode = SplitMode::kParaphrase;
  std::uint64_t seed = 0;
  double train_frac = 0.7;
  NotePartition notes;
  std::map<int, TemplatePartition> templates;  // keyed by lf_id
};

nlohmann::json assignment_to_json(const SplitAssignment& a);
SplitAssignment assignment_from_json(const nlohmann::json& j);

// Seeded shuffle of note ids followed by a proportional cut. Train and val
// sizes are rounded to nearest; test takes the remainder.
NotePartition split_notes(const std::vector<int>& note_ids, const std::array<double, 3>& ratios, std::uint64_t seed);

// Per logical form, floor(train_frac * n) templates go to train, clamped so
// both sides are non-empty when n >= 2. A lone template goes to train.
std::map<int, TemplatePartition> partition_templates(const std::map<int, std::vector<int>>& templates_by_lf,
                                                     double train_frac, std::uint64_t seed);

std::map<int, std::vector<int>> group_templates(const std::vector<corpus::QuestionTemplate>& templates);

struct ExampleSets {
  std::vector<corpus::QAExample> train, val, test;
};

// pl: train keeps (train note, QT_tr) examples, val/test keep (val/test note,
// QT_v/t) examples. r: notes decide, every template is kept.
ExampleSets filter_examples(const std::vector<corpus::QAExample>& examples, const SplitAssignment& assignment);

struct LeakageAudit {
  std::size_t template_overlap = 0;  // template ids shared by train and val/test
  std::size_t note_overlap = 0;      // note ids shared between any two sets
  bool clean() const { return note_overlap == 0; }
  bool clean_templates() const { return template_overlap == 0; }
};

LeakageAudit audit(const ExampleSets& sets);

SplitAssignment make_assignment(const std::vector<corpus::QAExample>& examples,
                                const std::vector<corpus::QuestionTemplate>& templates, SplitMode mode,
                                double train_frac, std::uint64_t seed, const std::array<double, 3>& note_ratios);

}  // namespace mtlqa::split
