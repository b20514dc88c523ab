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

#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <filesystem>

#include "common/error.hpp"
#include "corpus/build.hpp"
#include "text/encoding.hpp"
#include "text/entities.hpp"
#include "text/tokenizer.hpp"
#include "text/vocab.hpp"

using namespace mtlqa;
using namespace mtlqa::text;

static std::vector<std::string> texts(const std::vector<Token>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.push_back(t.text);
  return out;
}

TEST_CASE("tokenize: lowercases and splits punctuation") {
  CHECK(texts(tokenize("Penicillin 40 mg.")) == std::vector<std::string>{"penicillin", "40", "mg", "."});
  CHECK(texts(tokenize("x-ray")) == std::vector<std::string>{"x", "-", "ray"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n").empty());
}

TEST_CASE("tokenize: offset slices rebuild the non-whitespace text of the corpus") {
  corpus::GeneratorConfig g;
  g.num_notes = 8;
  const auto bundle = corpus::build_corpus(g, "sentence");
  for (const auto& ex : bundle.examples) {
    for (const std::string& s : {ex.question, ex.context_text()}) {
      std::string joined, stripped;
      for (const auto& t : tokenize(s)) joined += s.substr(t.begin, t.end - t.begin);
      for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) stripped += c;
      }
      CHECK(joined == stripped);
    }
  }
}

TEST_CASE("vocab: reserved ids, bijection, determinism, file round trip") {
  const std::vector<std::vector<std::string>> streams{{"b", "a", "b"}, {"c", "a", "b"}};
  const auto v = Vocab::build(streams);
  CHECK(v.id("[PAD]") == kPadId);
  CHECK(v.id("[UNK]") == kUnkId);
  CHECK(v.id("[CLS]") == kClsId);
  CHECK(v.id("[SEP]") == kSepId);
  CHECK(v.size() == 7);
  CHECK(v.id("b") == 4);  // most frequent first
  CHECK(v.id("a") == 5);
  CHECK(v.id("never-seen") == kUnkId);
  for (int i = 0; i < static_cast<int>(v.size()); ++i) CHECK(v.id(v.token(i)) == i);
  CHECK(Vocab::build(streams) == v);
  CHECK(Vocab::build(streams).digest() == v.digest());

  const auto trimmed = Vocab::build(streams, 2);
  CHECK(trimmed.contains("a"));
  CHECK_FALSE(trimmed.contains("c"));
  CHECK(trimmed.contains("[PAD]"));

  const auto path = (std::filesystem::temp_directory_path() / "mtlqa_vocab_test.txt").string();
  v.save(path);
  CHECK(Vocab::load(path) == v);
  std::filesystem::remove(path);
}

TEST_CASE("tag_entities: longest match, case-insensitive, no overlaps") {
  Gazetteer g;
  g.add("chest x ray", "diap");
  g.add("chest", "bpoc");
  g.add("40 mg", "qnco");
  auto tags = tag_entities("Chest X Ray was clear", g);
  REQUIRE(tags.size() == 1);
  CHECK(tags[0].type == entity_type_id("diap"));
  CHECK(tags[0].char_start == 0);
  CHECK(tags[0].char_end == 11);

  tags = tag_entities("aspirin 40 mg daily", g);
  REQUIRE(tags.size() == 1);
  CHECK(entity_type_code(tags[0].type) == std::string("qnco"));

  CHECK(tag_entities("nothing to see here", g).empty());
  CHECK_THROWS_AS(g.add("widget", "zzzz"), ConfigError);
}

TEST_CASE("tag_entities: tags never overlap on the synthetic corpus") {
  corpus::GeneratorConfig g;
  g.num_notes = 6;
  const auto bundle = corpus::build_corpus(g, "sentence");
  for (const auto& ex : bundle.examples) {
    const auto tags = tag_entities(ex.context_text(), bundle.gazetteer);
    for (std::size_t i = 0; i < tags.size(); ++i) {
      CHECK(tags[i].char_start < tags[i].char_end);
      CHECK(tags[i].type >= 1);
      CHECK(tags[i].type < kEntityVocabSize);
      if (i > 0) CHECK(tags[i - 1].char_end <= tags[i].char_start);
    }
  }
}

TEST_CASE("encode_pair: answer tokens, entities, padding") {
  Gazetteer g;
  g.add("aspirin", "clnd");
  g.add("40 mg", "qnco");
  const std::string q = "dose of aspirin?", ctx = "aspirin 40 mg daily";
  const auto vocab = Vocab::build({{"dose", "of", "aspirin", "?", "40", "mg", "daily"}});
  const auto pair = encode_pair(q, tag_entities(q, g), ctx, tag_entities(ctx, g), CharSpan{8, 13}, vocab, 16);

  CHECK(pair.length() == 16);
  // [CLS] dose of aspirin ? [SEP] aspirin 40 mg daily [SEP]
  CHECK(pair.token_ids[0] == kClsId);
  CHECK(pair.token_ids[5] == kSepId);
  CHECK(pair.context_begin == 6);
  CHECK(pair.context_end == 10);
  CHECK(pair.answer_start_tok == 7);
  CHECK(pair.answer_end_tok == 8);
  CHECK(vocab.token(pair.token_ids[7]) == "40");
  CHECK(vocab.token(pair.token_ids[8]) == "mg");
  CHECK(pair.entity_ids[3] == entity_type_id("clnd"));
  CHECK(pair.entity_ids[7] == entity_type_id("qnco"));
  CHECK(pair.entity_ids[8] == entity_type_id("qnco"));
  CHECK(pair.entity_ids[9] == 0);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(pair.segment_ids[i] == (i >= 6 && i <= 10 ? 1 : 0));
    if (i > 10) {
      CHECK_FALSE(pair.attention_mask[i]);
      CHECK(pair.token_ids[i] == kPadId);
      CHECK(pair.entity_ids[i] == 0);
    } else {
      CHECK(pair.attention_mask[i]);
    }
  }
  const auto chars = token_span_to_chars(pair, pair.answer_start_tok, pair.answer_end_tok);
  CHECK(ctx.substr(chars.start, chars.end - chars.start) == "40 mg");

  // Idempotent.
  const auto again = encode_pair(q, tag_entities(q, g), ctx, tag_entities(ctx, g), CharSpan{8, 13}, vocab, 16);
  CHECK(again.token_ids == pair.token_ids);
  CHECK(again.entity_ids == pair.entity_ids);

  // No tags: entity ids all zero.
  const auto bare = encode_pair(q, {}, ctx, {}, CharSpan{8, 13}, vocab, 16);
  CHECK(std::all_of(bare.entity_ids.begin(), bare.entity_ids.end(), [](int e) { return e == 0; }));
}

TEST_CASE("encode_pair: truncation and errors") {
  const auto vocab = Vocab::build({{"a", "b", "c"}});
  // Context cut from the right; an answer past the cut is dropped.
  const std::string ctx = "a b c a b c";
  const auto pair = encode_pair("a", {}, ctx, {}, CharSpan{10, 11}, vocab, 7);
  CHECK(pair.length() == 7);
  CHECK(pair.dropped);
  CHECK(pair.answer_start_tok == -1);
  CHECK(pair.answer_end_tok == -1);
  const auto kept = encode_pair("a", {}, ctx, {}, CharSpan{0, 1}, vocab, 7);
  CHECK_FALSE(kept.dropped);
  CHECK(kept.answer_start_tok == 3);
  // Question that cannot fit.
  CHECK_THROWS_AS(encode_pair("a b c a b", {}, ctx, {}, std::nullopt, vocab, 7), EncodingError);
}

TEST_CASE("encode_pair: entity ids only on attended positions") {
  corpus::GeneratorConfig g;
  g.num_notes = 4;
  const auto bundle = corpus::build_corpus(g, "sentence");
  for (const auto& ex : bundle.examples) {
    const CharSpan ans{ex.answer.char_start, ex.answer.char_end};
    const auto p = encode_pair(ex.question, ex.question_entities, ex.context_text(), ex.context_entities, ans,
                               bundle.vocab, kSentenceSeqLen);
    for (std::size_t i = 0; i < p.length(); ++i) {
      if (p.entity_ids[i] != 0) CHECK(p.attention_mask[i]);
    }
    REQUIRE(p.answer_start_tok >= 0);
    CHECK(p.in_context(static_cast<std::size_t>(p.answer_start_tok)));
    CHECK(p.in_context(static_cast<std::size_t>(p.answer_end_tok)));
    CHECK(p.dropped_tags == 0);
  }
}
