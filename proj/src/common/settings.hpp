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
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mtlqa {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

// Flat configuration with dotted keys, e.g. {"model.hidden_dim": 64}.
// Nested objects in input files are flattened on load.
class Settings {
 public:
  Settings() = default;

  static Settings from_json(const nlohmann::json& j);
  static Settings from_file(const std::string& path);

  // "key=value"; value parsed as JSON when possible, otherwise kept as a string.
  void apply_override(std::string_view assignment);
  void set(const std::string& key, nlohmann::json value) { values_[key] = std::move(value); }
  void merge(const Settings& other);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  // Keys under `prefix` not in `known` are rejected, catching typos in overrides.
  void require_known(const std::string& prefix, const std::vector<std::string>& known) const;

  nlohmann::json to_json() const;
  const std::map<std::string, nlohmann::json>& values() const { return values_; }

 private:
  std::map<std::string, nlohmann::json> values_;
};

}  // namespace mtlqa
