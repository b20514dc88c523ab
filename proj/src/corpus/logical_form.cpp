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

#include "corpus/logical_form.hpp"

namespace mtlqa::corpus {

std::vector<std::string> lf_tokenize(std::string_view lf) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : lf) {
    switch (c) {
      case ' ':
      case '\t':
      case '\n':
      case '\r':
      case '(':
      case ')':
      case '[':
      case ']':
      case '{':
      case '}':
      case '=':
      case ',':
      case ';':
        flush();
        break;
      default:
        cur.push_back(c);
    }
  }
  flush();
  return out;
}

std::vector<std::string> lf_slots(const LogicalForm& lf) {
  std::vector<std::string> slots;
  for (const auto& t : lf.lf_tokens) {
    if (t.size() > 2 && t.front() == '|' && t.back() == '|') {
      auto name = t.substr(1, t.size() - 2);
      bool seen = false;
      for (const auto& s : slots) seen = seen || s == name;
      if (!seen) slots.push_back(name);
    }
  }
  return slots;
}

const std::vector<LogicalForm>& lf_inventory() {
  static const std::vector<LogicalForm> inventory = [] {
    const char* strings[kNumLogicalForms] = {
        "MedicationEvent (|medication|) [dosage=x]",
        "MedicationEvent (|medication|) [sig=x]",
        "MedicationEvent (|medication|) causes {ConditionEvent (x) OR SymptomEvent (x)}",
        "MedicationEvent (|medication|) given {ConditionEvent (x) OR SymptomEvent (x)}",
        "[ProcedureEvent (|treatment|) given/conducted {ConditionEvent (x) OR SymptomEvent (x)}] OR "
        "[MedicationEvent (|treatment|) given {ConditionEvent (x) OR SymptomEvent (x)}]",
        "{MedicationEvent (x) CheckIfNull ([enddate]) OR MedicationEvent (x) [enddate>currentDate] OR "
        "ProcedureEvent (x) [date=x]} given {ConditionEvent (|problem|) OR SymptomEvent (|problem|)}",
        "{MedicationEvent (x) CheckIfNull ([enddate]) OR MedicationEvent (x) [enddate>currentDate]} given "
        "{ConditionEvent (|problem|) OR SymptomEvent (|problem|)}",
        "{MedicationEvent (|treatment|) OR ProcedureEvent (|treatment|)} given {ConditionEvent (x) OR "
        "SymptomEvent (x)}",
        "{MedicationEvent (|treatment|) OR ProcedureEvent (|treatment|)} improves/worsens/causes "
        "{ConditionEvent (x) OR SymptomEvent (x)}",
    };
    std::vector<LogicalForm> v;
    for (int i = 0; i < kNumLogicalForms; ++i) v.push_back({i, strings[i], lf_tokenize(strings[i])});
    return v;
  }();
  return inventory;
}

}  // namespace mtlqa::corpus
