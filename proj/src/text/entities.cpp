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

#include "text/entities.hpp"

#include <algorithm>
#include <fstream>

#include "common/error.hpp"
#include "text/tokenizer.hpp"

namespace mtlqa::text {

int entity_type_id(std::string_view code) {
  for (std::size_t i = 0; i < kSemanticTypes.size(); ++i) {
    if (code == kSemanticTypes[i].code) return static_cast<int>(i) + 1;
  }
  return 0;
}

const char* entity_type_code(int id) {
  if (id < 1 || id > static_cast<int>(kSemanticTypes.size())) {
    throw IndexError("entity type id " + std::to_string(id) + " out of range");
  }
  return kSemanticTypes[static_cast<std::size_t>(id - 1)].code;
}

nlohmann::json tags_to_json(const std::vector<EntityTag>& tags) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : tags) {
    arr.push_back({{"type", entity_type_code(t.type)}, {"start", t.char_start}, {"end", t.char_end}});
  }
  return arr;
}

std::vector<EntityTag> tags_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw DataError("entity tags must be an array");
  std::vector<EntityTag> out;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("type") || !item.contains("start") || !item.contains("end")) {
      throw DataError("entity tag requires fields type, start, end");
    }
    EntityTag t;
    t.type = entity_type_id(item.at("type").get<std::string>());
    if (t.type == 0) throw DataError("unknown semantic type '" + item.at("type").get<std::string>() + "'");
    t.char_start = item.at("start").get<std::size_t>();
    t.char_end = item.at("end").get<std::size_t>();
    if (t.char_start >= t.char_end) throw DataError("entity tag with empty character range");
    out.push_back(t);
  }
  return out;
}

void Gazetteer::add(std::string_view surface, std::string_view code) {
  const int type = entity_type_id(code);
  if (type == 0) throw ConfigError("gazetteer: unknown semantic type '" + std::string(code) + "'");
  auto key = normalize_phrase(surface);
  if (key.empty()) throw ConfigError("gazetteer: empty surface form");
  auto [it, inserted] = entries_.emplace(key, type);
  if (!inserted && it->second != type) {
    throw ConfigError("gazetteer: '" + key + "' assigned to both " + entity_type_code(it->second) + " and " +
                      std::string(code));
  }
  max_tokens_ = std::max(max_tokens_, tokenize(key).size());
}

int Gazetteer::lookup(std::string_view normalized) const {
  auto it = entries_.find(std::string(normalized));
  return it == entries_.end() ? 0 : it->second;
}

Gazetteer Gazetteer::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("gazetteer must be a JSON object of surface form -> type code");
  Gazetteer g;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) throw ConfigError("gazetteer: type for '" + it.key() + "' must be a string");
    g.add(it.key(), it.value().get<std::string>());
  }
  return g;
}

Gazetteer Gazetteer::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gazetteer '" + path + "'");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("gazetteer '" + path + "': " + e.what());
  }
}

nlohmann::json Gazetteer::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : entries_) j[k] = entity_type_code(v);
  return j;
}

void Gazetteer::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write gazetteer '" + path + "'");
  out << to_json().dump(1) << '\n';
}

std::vector<EntityTag> tag_entities(std::string_view text, const Gazetteer& gazetteer) {
  const auto tokens = tokenize(text);
  std::vector<EntityTag> tags;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t best_len = 0;
    int best_type = 0;
    std::string phrase;
    const std::size_t limit = std::min(gazetteer.max_phrase_tokens(), tokens.size() - i);
    for (std::size_t n = 1; n <= limit; ++n) {
      if (n > 1) phrase.push_back(' ');
      phrase += tokens[i + n - 1].text;
      if (int type = gazetteer.lookup(phrase); type != 0) {
        best_len = n;
        best_type = type;
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    tags.push_back({best_type, tokens[i].begin, tokens[i + best_len - 1].end});
    i += best_len;
  }
  return tags;
}

}  // namespace mtlqa::text
