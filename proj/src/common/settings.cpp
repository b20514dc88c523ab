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

#include "common/settings.hpp"

#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace mtlqa {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

namespace {

void flatten(const nlohmann::json& j, const std::string& prefix, std::map<std::string, nlohmann::json>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  out[prefix] = j;
}

}  // namespace

Settings Settings::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  Settings s;
  flatten(j, "", s.values_);
  return s;
}

Settings Settings::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

void Settings::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  std::string key(assignment.substr(0, eq));
  std::string raw(assignment.substr(eq + 1));
  auto parsed = nlohmann::json::parse(raw, nullptr, false);
  if (parsed.is_discarded() || parsed.is_object()) {
    values_[key] = raw;
  } else {
    values_[key] = parsed;
  }
}

void Settings::merge(const Settings& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

double Settings::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (!it->second.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return it->second.get<double>();
}

long long Settings::get_int(const std::string& key, long long fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto& v = it->second;
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<long long>(d))) return static_cast<long long>(d);
  }
  throw ConfigError("config key '" + key + "' must be an integer");
}

bool Settings::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.is_boolean()) return it->second.get<bool>();
  if (it->second.is_string()) {
    const auto& s = it->second.get_ref<const std::string&>();
    if (s == "true") return true;
    if (s == "false") return false;
  }
  throw ConfigError("config key '" + key + "' must be a boolean");
}

std::string Settings::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.is_string()) return it->second.get<std::string>();
  return it->second.dump();
}

void Settings::require_known(const std::string& prefix, const std::vector<std::string>& known) const {
  for (const auto& [k, v] : values_) {
    if (k.rfind(prefix, 0) != 0) continue;
    const std::string rest = k.substr(prefix.size());
    bool ok = false;
    for (const auto& name : known) ok = ok || name == rest;
    if (!ok) throw ConfigError("unknown config key '" + k + "'");
  }
}

nlohmann::json Settings::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

}  // namespace mtlqa
