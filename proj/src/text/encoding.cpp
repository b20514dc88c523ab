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

#include "text/encoding.hpp"

#include "common/error.hpp"
#include "text/tokenizer.hpp"

namespace mtlqa::text {

namespace {

// Assigns each tag's type to every token whose character range intersects it.
// The first tag to claim a token keeps it. Returns the number of tags that
// reached no token.
std::size_t assign_entities(const std::vector<Token>& tokens, std::size_t kept, const std::vector<EntityTag>& tags,
                            std::vector<int>& entity_ids, std::size_t offset) {
  std::size_t dropped = 0;
  for (const auto& tag : tags) {
    bool placed = false;
    for (std::size_t i = 0; i < kept; ++i) {
      const auto& t = tokens[i];
      if (t.begin < tag.char_end && tag.char_start < t.end) {
        placed = true;
        if (entity_ids[offset + i] == 0) entity_ids[offset + i] = tag.type;
      }
    }
    if (!placed) ++dropped;
  }
  return dropped;
}

}  // namespace

EncodedPair encode_pair(std::string_view question, const std::vector<EntityTag>& question_tags,
                        std::string_view context, const std::vector<EntityTag>& context_tags,
                        std::optional<CharSpan> answer, const Vocab& vocab, std::size_t max_seq_len) {
  const auto q_tokens = tokenize(question);
  const auto c_tokens = tokenize(context);
  if (q_tokens.size() + 3 > max_seq_len) {
    throw EncodingError("question needs " + std::to_string(q_tokens.size() + 3) + " positions but max_seq_len is " +
                        std::to_string(max_seq_len));
  }
  if (answer && (answer->start >= answer->end || answer->end > context.size())) {
    throw EncodingError("answer character span lies outside the context");
  }

  const std::size_t room = max_seq_len - q_tokens.size() - 3;
  const std::size_t kept = std::min(room, c_tokens.size());

  EncodedPair p;
  p.token_ids.assign(max_seq_len, kPadId);
  p.segment_ids.assign(max_seq_len, 0);
  p.attention_mask.assign(max_seq_len, false);
  p.entity_ids.assign(max_seq_len, 0);

  std::size_t pos = 0;
  p.token_ids[pos++] = kClsId;
  for (const auto& t : q_tokens) p.token_ids[pos++] = vocab.id(t.text);
  p.token_ids[pos++] = kSepId;
  p.context_begin = pos;
  for (std::size_t i = 0; i < kept; ++i) {
    p.token_ids[pos] = vocab.id(c_tokens[i].text);
    p.segment_ids[pos] = 1;
    p.context_offsets.push_back({c_tokens[i].begin, c_tokens[i].end});
    ++pos;
  }
  p.context_end = pos;
  p.token_ids[pos] = kSepId;
  p.segment_ids[pos] = 1;
  ++pos;
  for (std::size_t i = 0; i < pos; ++i) p.attention_mask[i] = true;

  p.dropped_tags += assign_entities(q_tokens, q_tokens.size(), question_tags, p.entity_ids, 1);
  p.dropped_tags += assign_entities(c_tokens, kept, context_tags, p.entity_ids, p.context_begin);

  if (answer) {
    int first = -1, last = -1;
    for (std::size_t i = 0; i < c_tokens.size(); ++i) {
      if (c_tokens[i].end > answer->start && c_tokens[i].begin < answer->end) {
        if (first < 0) first = static_cast<int>(i);
        last = static_cast<int>(i);
      }
    }
    if (first < 0 || static_cast<std::size_t>(last) >= kept) {
      p.dropped = true;
    } else {
      p.answer_start_tok = static_cast<int>(p.context_begin) + first;
      p.answer_end_tok = static_cast<int>(p.context_begin) + last;
    }
  }
  return p;
}

CharSpan token_span_to_chars(const EncodedPair& pair, int start_tok, int end_tok) {
  if (start_tok > end_tok || start_tok < 0 || !pair.in_context(static_cast<std::size_t>(start_tok)) ||
      !pair.in_context(static_cast<std::size_t>(end_tok))) {
    throw IndexError("token span [" + std::to_string(start_tok) + ", " + std::to_string(end_tok) +
                     "] is not inside the context segment");
  }
  return {pair.context_offsets[static_cast<std::size_t>(start_tok) - pair.context_begin].start,
          pair.context_offsets[static_cast<std::size_t>(end_tok) - pair.context_begin].end};
}

}  // namespace mtlqa::text
