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

#include "corpus/templates.hpp"

#include "common/error.hpp"
#include "corpus/logical_form.hpp"

namespace mtlqa::corpus {

const char* fact_kind_name(FactKind k) {
  switch (k) {
    case FactKind::kPrescription: return "prescription";
    case FactKind::kMedIndication: return "medication_indication";
    case FactKind::kAdverseReaction: return "adverse_reaction";
    case FactKind::kProcIndication: return "procedure_indication";
    case FactKind::kProcOutcome: return "procedure_outcome";
  }
  return "?";
}

FactKind fact_kind_from_name(const std::string& name) {
  for (int i = 0; i < kNumFactKinds; ++i) {
    if (name == fact_kind_name(static_cast<FactKind>(i))) return static_cast<FactKind>(i);
  }
  throw DataError("unknown fact kind '" + name + "'");
}

const std::vector<Role>& fact_roles(FactKind k) {
  static const std::vector<Role> prescription = {Role::kMedication, Role::kDosage, Role::kSig};
  static const std::vector<Role> med_indication = {Role::kMedication, Role::kProblem};
  static const std::vector<Role> adverse = {Role::kMedication, Role::kSymptom};
  static const std::vector<Role> proc_indication = {Role::kProcedure, Role::kProblem};
  static const std::vector<Role> proc_outcome = {Role::kProcedure, Role::kSymptom};
  switch (k) {
    case FactKind::kPrescription: return prescription;
    case FactKind::kMedIndication: return med_indication;
    case FactKind::kAdverseReaction: return adverse;
    case FactKind::kProcIndication: return proc_indication;
    case FactKind::kProcOutcome: return proc_outcome;
  }
  throw InvariantError("unknown fact kind");
}

std::vector<std::string> template_slots(const std::string& pattern) {
  std::vector<std::string> slots;
  std::size_t pos = 0;
  while ((pos = pattern.find('|', pos)) != std::string::npos) {
    const auto close = pattern.find('|', pos + 1);
    if (close == std::string::npos) throw ConfigError("unterminated slot marker in '" + pattern + "'");
    slots.push_back(pattern.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return slots;
}

const std::vector<LfBinding>& lf_bindings(int lf_id) {
  using F = FactKind;
  using R = Role;
  static const std::vector<std::vector<LfBinding>> table = {
      {{F::kPrescription, R::kMedication, R::kDosage}},
      {{F::kPrescription, R::kMedication, R::kSig}},
      {{F::kAdverseReaction, R::kMedication, R::kSymptom}},
      {{F::kMedIndication, R::kMedication, R::kProblem}},
      {{F::kProcIndication, R::kProcedure, R::kProblem}, {F::kMedIndication, R::kMedication, R::kProblem}},
      {{F::kMedIndication, R::kProblem, R::kMedication}, {F::kProcIndication, R::kProblem, R::kProcedure}},
      {{F::kMedIndication, R::kProblem, R::kMedication}},
      {{F::kMedIndication, R::kMedication, R::kProblem}, {F::kProcIndication, R::kProcedure, R::kProblem}},
      {{F::kAdverseReaction, R::kMedication, R::kSymptom}, {F::kProcOutcome, R::kProcedure, R::kSymptom}},
  };
  if (lf_id < 0 || lf_id >= static_cast<int>(table.size())) {
    throw IndexError("logical form id " + std::to_string(lf_id) + " has no bindings");
  }
  return table[static_cast<std::size_t>(lf_id)];
}

const std::vector<QuestionTemplate>& default_question_templates() {
  static const std::vector<QuestionTemplate> templates = [] {
    const std::vector<std::vector<const char*>> by_lf = {
        {"How much |medication| does the patient take per day?", "What is her current dose of |medication|?",
         "What is the current dose of the patient's |medication|?", "What is the current dose of |medication|?",
         "What is the dosage of |medication|?", "What was the dosage prescribed of |medication|?"},
        {"How often does the patient take |medication|?", "What is the frequency of |medication|?",
         "How frequently is |medication| given?", "What is the schedule for |medication|?",
         "When does the patient take |medication|?", "What are the instructions for taking |medication|?",
         "How is |medication| taken?"},
        {"What side effects did |medication| cause?", "What adverse reaction did the patient have to |medication|?",
         "Did |medication| cause any symptoms?", "What symptoms were caused by |medication|?",
         "Has the patient had any reaction to |medication|?", "What problems has |medication| caused?"},
        {"Why is the patient on |medication|?", "What was |medication| prescribed for?",
         "Why was |medication| started?", "What condition is |medication| treating?",
         "What is the indication for |medication|?", "For what reason does the patient take |medication|?"},
        {"Why did the patient have |treatment|?", "What was |treatment| done for?",
         "What is the reason for |treatment|?", "Why was |treatment| given?",
         "What problem was |treatment| used for?", "Which condition required |treatment|?"},
        {"What treatment has the patient had for |problem|?", "How was |problem| treated?",
         "What was done for |problem|?", "What has been tried for |problem|?",
         "How was the patient's |problem| managed?", "What therapy was used for |problem|?"},
        {"What medication is the patient on for |problem|?", "What drug was given for |problem|?",
         "Which medication treats the |problem|?", "What is the patient taking for |problem|?",
         "What medicine was prescribed for |problem|?", "Is the patient on any medication for |problem|?"},
        {"What is |treatment| treating?", "What was the indication for |treatment|?",
         "|treatment| was given for what?", "What diagnosis led to |treatment|?",
         "What issue prompted |treatment|?", "Which problem does |treatment| address?"},
        {"What did |treatment| improve?", "What symptoms changed after |treatment|?",
         "Did |treatment| make anything worse?", "What was the effect of |treatment|?",
         "What outcome followed |treatment|?", "What happened to the patient's symptoms after |treatment|?"},
    };
    std::vector<QuestionTemplate> out;
    for (std::size_t lf = 0; lf < by_lf.size(); ++lf) {
      for (const char* p : by_lf[lf]) out.push_back({static_cast<int>(out.size()), static_cast<int>(lf), p});
    }
    return out;
  }();
  return templates;
}

const std::vector<std::string>& sentence_patterns(FactKind k) {
  static const std::vector<std::vector<std::string>> patterns = {
      {"{medication} {dosage} {sig} was prescribed.", "Patient takes {medication} {dosage} {sig}.",
       "Continue {medication} at {dosage} {sig}.", "{medication} was started at {dosage} {sig} on admission.",
       "Discharged on {medication} {dosage} {sig}.", "Home medications include {medication} {dosage} {sig}.",
       "{dosage} of {medication} given {sig}.", "She receives {medication} {dosage} by mouth {sig}."},
      {"{medication} was started for {problem}.", "{problem} was treated with {medication}.",
       "Patient was given {medication} for {problem}.", "For {problem}, {medication} was continued.",
       "{medication} was prescribed to manage {problem}.", "Given {problem}, the team began {medication}.",
       "{problem}: on {medication}."},
      {"{medication} caused {symptom}.", "Patient developed {symptom} after starting {medication}.",
       "{symptom} was attributed to {medication}.", "{medication} was stopped because of {symptom}.",
       "Reports {symptom} secondary to {medication}.", "Adverse reaction to {medication} with {symptom}."},
      {"{procedure} was performed for {problem}.", "Underwent {procedure} to evaluate {problem}.",
       "{problem} was managed with {procedure}.", "Because of {problem}, {procedure} was done.",
       "{procedure} was ordered given {problem}.", "Patient had {procedure} for workup of {problem}."},
      {"{symptom} improved after {procedure}.", "After {procedure}, the patient had worsening {symptom}.",
       "{procedure} relieved the {symptom}.", "{procedure} was complicated by {symptom}.",
       "Following {procedure}, {symptom} resolved.", "{symptom} worsened after {procedure}."},
  };
  return patterns.at(static_cast<std::size_t>(k));
}

const std::vector<std::string>& distractor_patterns() {
  static const std::vector<std::string> patterns = {
      "Patient is a {aggp} seen for follow up.",
      "Examination of the {bpoc} was unremarkable.",
      "{lbtr} noted on admission.",
      "No history of {sbst} use.",
      "Uses a {phob} at home.",
      "The {anst} appears normal.",
      "Family history notable for {cgab}.",
      "Prior {evnt} without complications.",
      "Denies {symptom}.",
      "{procedure} is scheduled next month.",
      "History of {problem}, stable.",
      "Allergic to {sbst}.",
      "Review of the {bpoc} showed {lbtr}.",
      "Vital signs stable overnight.",
      "Will follow up in two weeks.",
  };
  return patterns;
}

const std::vector<std::string>& decoration_prefixes() {
  static const std::vector<std::string> prefixes = {
      "During {evnt}, ", "Per {aggp} protocol, ", "With {lbtr}, ", "After exam of the {bpoc}, ",
  };
  return prefixes;
}

}  // namespace mtlqa::corpus
