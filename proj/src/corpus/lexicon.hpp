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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "text/entities.hpp"

namespace mtlqa::corpus {

// Fact elements a sentence can realize and a question can ask about.
enum class Role { kMedication, kDosage, kSig, kProblem, kProcedure, kSymptom };

const char* role_name(Role r);

struct LexEntry {
  std::string surface;
  std::string type;  // semantic type code, empty when untyped
};

struct LexiconSizes {
  // Procedurally generated names added on top of the built-in lists.
  std::size_t extra_medications = 0;
  std::size_t extra_conditions = 0;
  std::size_t extra_symptoms = 0;
  std::size_t extra_procedures = 0;
};

struct Lexicon {
  std::vector<LexEntry> medications;
  std::vector<LexEntry> dosages;
  std::vector<LexEntry> sigs;
  std::vector<LexEntry> conditions;
  std::vector<LexEntry> symptoms;
  std::vector<LexEntry> procedures;
  // Entities that only appear in decoration and distractor text, keyed by type code.
  std::map<std::string, std::vector<std::string>> background;

  const std::vector<LexEntry>& for_role(Role r) const;
  // Every typed surface form.
  text::Gazetteer gazetteer() const;
};

// Built-in clinical vocabulary plus `sizes` generated names, deterministic in `seed`.
Lexicon build_lexicon(const LexiconSizes& sizes, std::uint64_t seed);

}  // namespace mtlqa::corpus
