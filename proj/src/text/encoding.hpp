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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "text/entities.hpp"
#include "text/vocab.hpp"

namespace mtlqa::text {

inline constexpr std::size_t kSentenceSeqLen = 128;
inline constexpr std::size_t kParagraphSeqLen = 384;

struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

// [CLS] question [SEP] context [SEP] [PAD]...
struct EncodedPair {
  std::vector<int> token_ids;
  std::vector<int> segment_ids;
  std::vector<bool> attention_mask;
  std::vector<int> entity_ids;
  int answer_start_tok = -1;
  int answer_end_tok = -1;

  // Set when the answer was cut off by context truncation.
  bool dropped = false;
  // Tags that ended up on no token (truncated away).
  std::size_t dropped_tags = 0;

  // Context tokens occupy positions [context_begin, context_end).
  std::size_t context_begin = 0;
  std::size_t context_end = 0;
  // Character range in the context string of each context token.
  std::vector<CharSpan> context_offsets;

  std::size_t length() const { return token_ids.size(); }
  bool in_context(std::size_t pos) const { return pos >= context_begin && pos < context_end; }
  // Positions holding real tokens.
  std::size_t used_length() const { return context_end + 1; }
};

// Question tokens are never truncated: a question needing more than
// max_seq_len - 3 positions is an EncodingError. Context is cut from the right.
EncodedPair encode_pair(std::string_view question, const std::vector<EntityTag>& question_tags,
                        std::string_view context, const std::vector<EntityTag>& context_tags,
                        std::optional<CharSpan> answer, const Vocab& vocab, std::size_t max_seq_len);

// Character span in the context covered by tokens [start_tok, end_tok].
CharSpan token_span_to_chars(const EncodedPair& pair, int start_tok, int end_tok);

}  // namespace mtlqa::text
