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
#include <string_view>
#include <vector>

namespace mtlqa::corpus {

struct LogicalForm {
  int lf_id = 0;
  std::string lf_string;
  std::vector<std::string> lf_tokens;  // multiset, in order of appearance
};

// Splits on whitespace and ( ) [ ] { } = , ; and drops empty fragments.
// Slot markers such as |medication| survive as single tokens.
std::vector<std::string> lf_tokenize(std::string_view lf);

// Slot markers (tokens of the form |name|) of a logical form, without bars.
std::vector<std::string> lf_slots(const LogicalForm& lf);

// The nine logical forms: the dosage form plus the eight medication/ADR forms.
const std::vector<LogicalForm>& lf_inventory();

inline constexpr int kNumLogicalForms = 9;

}  // namespace mtlqa::corpus
