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

#include <string>
#include <vector>

#include "corpus/lexicon.hpp"

namespace mtlqa::corpus {

enum class FactKind { kPrescription, kMedIndication, kAdverseReaction, kProcIndication, kProcOutcome };
inline constexpr int kNumFactKinds = 5;

const char* fact_kind_name(FactKind k);
FactKind fact_kind_from_name(const std::string& name);
// Elements a fact of this kind carries.
const std::vector<Role>& fact_roles(FactKind k);

// Question paraphrase with one slot marker such as |medication|.
struct QuestionTemplate {
  int template_id = 0;
  int lf_id = 0;
  std::string pattern;
};

// Slot names used by a template pattern, without bars.
std::vector<std::string> template_slots(const std::string& pattern);

// How a logical form is answered from a fact: the question slot is filled
// from `slot_role` and the answer is the `answer_role` element.
struct LfBinding {
  FactKind kind;
  Role slot_role;
  Role answer_role;
};

const std::vector<LfBinding>& lf_bindings(int lf_id);

const std::vector<QuestionTemplate>& default_question_templates();

// Sentence patterns use {medication}, {dosage}, {sig}, {problem}, {procedure},
// {symptom} for fact elements and {<type code>} for background entities.
const std::vector<std::string>& sentence_patterns(FactKind k);
const std::vector<std::string>& distractor_patterns();
// Optional leading clauses attached to fact sentences.
const std::vector<std::string>& decoration_prefixes();

}  // namespace mtlqa::corpus
