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

#include "text/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "common/error.hpp"
#include "common/settings.hpp"

namespace mtlqa::text {

namespace {
const char* const kReserved[kReservedCount] = {"[PAD]", "[UNK]", "[CLS]", "[SEP]"};
}

Vocab::Vocab() {
  for (const char* r : kReserved) add(r);
}

void Vocab::add(const std::string& token) {
  if (ids_.count(token)) return;
  ids_.emplace(token, static_cast<int>(tokens_.size()));
  tokens_.push_back(token);
}

Vocab Vocab::build(const std::vector<std::vector<std::string>>& token_streams, std::size_t min_frequency) {
  std::map<std::string, std::size_t> counts;
  for (const auto& stream : token_streams) {
    for (const auto& t : stream) ++counts[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [tok, n] : counts) {
    if (n >= min_frequency) kept.emplace_back(tok, n);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocab v;
  for (const auto& [tok, n] : kept) v.add(tok);
  return v;
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocab file '" + path + "'");
  Vocab v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw DataError(path + ":" + std::to_string(lineno) + ": empty vocab entry");
    if (v.contains(line)) throw DataError(path + ":" + std::to_string(lineno) + ": duplicate token '" + line + "'");
    v.add(line);
  }
  return v;
}

void Vocab::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write vocab file '" + path + "'");
  for (std::size_t i = kReservedCount; i < tokens_.size(); ++i) out << tokens_[i] << '\n';
  if (!out) throw IoError("failed writing vocab file '" + path + "'");
}

int Vocab::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnkId : it->second;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw IndexError("vocab id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

bool Vocab::contains(std::string_view token) const { return ids_.count(std::string(token)) != 0; }

std::uint64_t Vocab::digest() const {
  std::uint64_t h = fnv1a64("vocab");
  for (const auto& t : tokens_) {
    h = fnv1a64(t, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

}  // namespace mtlqa::text
