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
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mtlqa::text {

struct SemanticType {
  const char* code;
  const char* description;
};

// The closed set of clinical semantic types used for entity typing.
inline constexpr std::array<SemanticType, 19> kSemanticTypes = {{
    {"acab", "Acquired Abnormality"},
    {"aggp", "Age Group"},
    {"anab", "Anatomical Abnormality"},
    {"anst", "Anatomical Structure"},
    {"bpoc", "Body Part, Organ, or Organ Component"},
    {"cgab", "Congenital Abnormality"},
    {"clnd", "Clinical Drug"},
    {"diap", "Diagnostic Procedure"},
    {"emod", "Experimental Model of Disease"},
    {"evnt", "Event"},
    {"fndg", "Finding"},
    {"inpo", "Injury or Poisoning"},
    {"lbpr", "Laboratory Procedure"},
    {"lbtr", "Laboratory or Test Result"},
    {"phob", "Physical Object"},
    {"qnco", "Quantitative Concept"},
    {"sbst", "Substance"},
    {"sosy", "Sign or Symptom"},
    {"topp", "Therapeutic or Preventive Procedure"},
}};

// Entity ids: 0 = no entity, 1..19 = kSemanticTypes[id - 1].
inline constexpr int kEntityVocabSize = static_cast<int>(kSemanticTypes.size()) + 1;

// Returns 0 when the code is not in the closed list.
int entity_type_id(std::string_view code);
const char* entity_type_code(int id);

struct EntityTag {
  int type = 0;  // 1..19
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const EntityTag&) const = default;
};

nlohmann::json tags_to_json(const std::vector<EntityTag>& tags);
std::vector<EntityTag> tags_from_json(const nlohmann::json& j);

// Surface form -> semantic type. Surface forms are stored normalized (see
// normalize_phrase) so matching is case-insensitive and token-aligned.
class Gazetteer {
 public:
  void add(std::string_view surface, std::string_view code);
  std::size_t size() const { return entries_.size(); }
  std::size_t max_phrase_tokens() const { return max_tokens_; }
  // 0 when absent.
  int lookup(std::string_view normalized) const;

  const std::map<std::string, int>& entries() const { return entries_; }

  static Gazetteer from_json(const nlohmann::json& j);
  static Gazetteer load(const std::string& path);
  nlohmann::json to_json() const;
  void save(const std::string& path) const;

 private:
  std::map<std::string, int> entries_;
  std::size_t max_tokens_ = 0;
};

// Left-to-right scan taking the longest gazetteer phrase starting at each
// token; matched tokens are consumed, so tags never overlap.
std::vector<EntityTag> tag_entities(std::string_view text, const Gazetteer& gazetteer);

}  // namespace mtlqa::text
