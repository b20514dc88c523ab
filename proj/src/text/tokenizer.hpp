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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mtlqa::text {

struct Token {
  std::string text;   // lowercased
  std::size_t begin;  // byte offsets into the source text
  std::size_t end;
};

// Lowercases ASCII letters and splits on whitespace; every ASCII punctuation
// character becomes a token of its own. Bytes >= 0x80 are word characters.
std::vector<Token> tokenize(std::string_view text);

// Token texts joined by single spaces; the canonical key for gazetteer lookups.
std::string normalize_phrase(std::string_view text);

}  // namespace mtlqa::text
