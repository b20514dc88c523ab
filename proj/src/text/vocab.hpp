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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mtlqa::text {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kClsId = 2;
inline constexpr int kSepId = 3;
inline constexpr int kReservedCount = 4;

class Vocab {
 public:
  // Reserved tokens only.
  Vocab();

  // Keeps tokens seen at least `min_frequency` times; ids ordered by descending
  // count, ties broken lexicographically.
  static Vocab build(const std::vector<std::vector<std::string>>& token_streams, std::size_t min_frequency = 1);

  // One token per line; line n gets id n + kReservedCount.
  static Vocab load(const std::string& path);
  void save(const std::string& path) const;

  int id(std::string_view token) const;
  const std::string& token(int id) const;
  std::size_t size() const { return tokens_.size(); }
  bool contains(std::string_view token) const;
  std::uint64_t digest() const;

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  void add(const std::string& token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace mtlqa::text
