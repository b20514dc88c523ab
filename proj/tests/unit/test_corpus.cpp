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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "common/error.hpp"
#include "corpus/build.hpp"
#include "corpus/dataset.hpp"
#include "corpus/generator.hpp"
#include "corpus/logical_form.hpp"
#include "corpus/templates.hpp"
#include "text/entities.hpp"
#include "text/tokenizer.hpp"

using namespace mtlqa;
using namespace mtlqa::corpus;

TEST_CASE("lf_tokenize: delimiter rules") {
  CHECK(lf_tokenize("MedicationEvent (|medication|) [dosage=x]") ==
        std::vector<std::string>{"MedicationEvent", "|medication|", "dosage", "x"});
  CHECK(lf_tokenize("").empty());
  CHECK(lf_tokenize(" ( ) ; , ").empty());
  CHECK(lf_tokenize("{a OR b};c") == std::vector<std::string>{"a", "OR", "b", "c"});
}

TEST_CASE("lf inventory: nine forms, tokens consistent, shared tokens exist") {
  const auto& inv = lf_inventory();
  REQUIRE(inv.size() == kNumLogicalForms);
  std::set<std::string> strings;
  for (std::size_t i = 0; i < inv.size(); ++i) {
    CHECK(inv[i].lf_id == static_cast<int>(i));
    CHECK(inv[i].lf_tokens == lf_tokenize(inv[i].lf_string));
    strings.insert(inv[i].lf_string);
  }
  CHECK(strings.size() == inv.size());
  CHECK(inv[0].lf_string == "MedicationEvent (|medication|) [dosage=x]");
  const auto& a = inv[0].lf_tokens;
  const auto& b = inv[1].lf_tokens;
  CHECK(std::find(a.begin(), a.end(), "MedicationEvent") != a.end());
  CHECK(std::find(b.begin(), b.end(), "MedicationEvent") != b.end());
}

TEST_CASE("templates: at least six per LF, slots drawn from the LF") {
  std::map<int, int> count;
  for (const auto& t : default_question_templates()) {
    ++count[t.lf_id];
    const auto slots = template_slots(t.pattern);
    REQUIRE(slots.size() == 1);
    const auto lf_slot_names = lf_slots(lf_inventory()[static_cast<std::size_t>(t.lf_id)]);
    CHECK(std::find(lf_slot_names.begin(), lf_slot_names.end(), slots[0]) != lf_slot_names.end());
  }
  CHECK(count.size() == kNumLogicalForms);
  for (const auto& [lf, n] : count) CHECK(n >= 6);
}

TEST_CASE("generate_corpus: determinism and distractor counts") {
  GeneratorConfig g;
  g.seed = 21;
  g.num_notes = 10;
  const auto lex = build_lexicon(g.lexicon, g.seed);
  const auto a = generate_corpus(g, lex), b = generate_corpus(g, lex);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(note_to_json(a[i]) == note_to_json(b[i]));

  g.num_notes = 1000;
  g.facts_per_note = 5;
  g.distractor_rate = 0.5;
  const auto many = generate_corpus(g, lex);
  double distractors = 0.0;
  for (const auto& n : many) {
    CHECK(n.facts.size() == 5);
    distractors += static_cast<double>(n.sentences.size() - n.facts.size());
  }
  // Binomial(10, 0.5) per note: mean 5, standard error over 1000 notes about 0.05.
  CHECK(std::abs(distractors / 1000.0 - 5.0) < 0.25);
}

TEST_CASE("generate_corpus: every fact sentence holds its surface forms, entities are gazetteer members") {
  GeneratorConfig g;
  g.num_notes = 50;
  const auto lex = build_lexicon(g.lexicon, g.seed);
  const auto gaz = lex.gazetteer();
  for (const auto& n : generate_corpus(g, lex)) {
    std::set<std::size_t> used;
    for (const auto& f : n.facts) {
      CHECK(used.insert(f.sentence_index).second);  // one sentence per fact
      const auto& s = n.sentences.at(f.sentence_index);
      for (const auto& m : f.mentions) {
        CHECK(s.substr(m.char_start, m.char_end - m.char_start) == m.text);
        if (m.role != Role::kSig) CHECK(gaz.lookup(text::normalize_phrase(m.text)) != 0);
      }
    }
  }
}

TEST_CASE("generate_corpus: empty slot vocabulary is a configuration error") {
  GeneratorConfig g;
  g.num_notes = 2;
  auto lex = build_lexicon(g.lexicon, g.seed);
  lex.medications.clear();
  CHECK_THROWS_AS(generate_corpus(g, lex), ConfigError);
  GeneratorConfig zero;
  zero.num_notes = 0;
  CHECK_THROWS_AS(generate_corpus(zero, build_lexicon(zero.lexicon, 1)), ConfigError);
}

TEST_CASE("instantiate_questions: label soundness and paraphrase consistency") {
  GeneratorConfig g;
  g.num_notes = 30;
  const auto bundle = build_corpus(g, "sentence");
  REQUIRE(!bundle.examples.empty());
  std::map<std::pair<std::string, int>, std::string> answer_of;  // (note:fact, lf) -> answer
  for (const auto& ex : bundle.examples) {
    const auto& note = bundle.notes.at(static_cast<std::size_t>(ex.note_id));
    const auto& fact = note.facts.at(ex.fact_index);
    // The answer is the element the LF designates for this fact kind.
    const LfBinding* binding = nullptr;
    for (const auto& b : lf_bindings(ex.lf_id)) {
      if (b.kind == fact.kind) binding = &b;
    }
    REQUIRE(binding != nullptr);
    CHECK(ex.answer.text == fact.find(binding->answer_role)->text);
    CHECK(ex.context.size() == 1);
    CHECK(ex.context[0] == note.sentences[fact.sentence_index]);
    const auto ctx = ex.context_text();
    CHECK(ctx.substr(ex.answer.char_start, ex.answer.char_end - ex.answer.char_start) == ex.answer.text);
    const auto& tpl = default_question_templates().at(static_cast<std::size_t>(ex.question_template_id));
    CHECK(tpl.lf_id == ex.lf_id);
    const auto key = std::make_pair(std::to_string(ex.note_id) + ":" + std::to_string(ex.fact_index), ex.lf_id);
    auto [it, inserted] = answer_of.emplace(key, ex.answer.text);
    if (!inserted) CHECK(it->second == ex.answer.text);
  }
}

TEST_CASE("instantiate_questions: dosage example and six paraphrases per fact") {
  Note note;
  note.note_id = 0;
  note.sentences = {"Patient takes aspirin 40 mg daily."};
  Fact f;
  f.kind = FactKind::kPrescription;
  f.sentence_index = 0;
  f.mentions = {{Role::kMedication, "aspirin", 14, 21}, {Role::kDosage, "40 mg", 22, 27}, {Role::kSig, "daily", 28, 33}};
  note.facts = {f};
  text::Gazetteer gaz;
  gaz.add("aspirin", "clnd");
  gaz.add("40 mg", "qnco");

  std::vector<QuestionTemplate> tpls = {{0, 0, "What is the dosage of |medication|?"}};
  auto out = instantiate_questions({note}, tpls, gaz);
  REQUIRE(out.size() == 1);
  CHECK(out[0].question == "what is the dosage of aspirin?");
  CHECK(out[0].answer.text == "40 mg");

  std::vector<QuestionTemplate> dosage_only;
  for (const auto& t : default_question_templates()) {
    if (t.lf_id == 0) dosage_only.push_back(t);
  }
  REQUIRE(dosage_only.size() == 6);
  out = instantiate_questions({note}, dosage_only, gaz);
  CHECK(out.size() == 6);
  for (const auto& ex : out) CHECK(ex.answer.text == "40 mg");

  // A template whose slot no fact provides.
  InstantiationStats stats;
  out = instantiate_questions({note}, {{9, 5, "How was |problem| treated?"}}, gaz, &stats);
  CHECK(out.empty());
}

TEST_CASE("paragraph windows: boundaries, rebased offsets, uniform evidence position") {
  GeneratorConfig g;
  g.num_notes = 5;
  g.min_note_sentences = 21;
  const auto lex = build_lexicon(g.lexicon, g.seed);
  const auto gaz = lex.gazetteer();
  const auto notes = generate_corpus(g, lex);
  const auto sentence = instantiate_questions(notes, default_question_templates(), gaz);
  REQUIRE(!sentence.empty());
  const auto& ex = sentence.front();
  const auto& note = notes.at(static_cast<std::size_t>(ex.note_id));
  Rng rng(3);

  auto first = build_paragraph_context(ex, note, lex, gaz, rng, {15, 0});
  CHECK(first.context.size() == 15);
  CHECK(first.evidence_index == 0);
  auto last = build_paragraph_context(ex, note, lex, gaz, rng, {20, 19});
  CHECK(last.context.size() == 20);
  CHECK(last.evidence_index == 19);
  for (const auto& p : {first, last}) {
    CHECK(p.context[p.evidence_index] == ex.context[0]);
    const auto text = p.context_text();
    CHECK(text.substr(p.answer.char_start, p.answer.char_end - p.answer.char_start) == ex.answer.text);
    CHECK(p.answer.sentence_index == p.evidence_index);
  }
  CHECK_THROWS_AS(build_paragraph_context(ex, note, lex, gaz, rng, {15, 15}), InvariantError);

  std::vector<int> bins(5, 0);
  Rng draw(99);
  for (int i = 0; i < 10000; ++i) {
    const auto w = draw_paragraph_window(draw);
    CHECK(w.length >= 15);
    CHECK(w.length <= 20);
    CHECK(w.before < w.length);
    const double rel = (static_cast<double>(w.before) + 0.5) / static_cast<double>(w.length);
    ++bins[static_cast<std::size_t>(rel * 5.0)];
  }
  for (int b : bins) CHECK(std::abs(b / 10000.0 - 0.2) < 0.02);
}

TEST_CASE("build_corpus: paragraph setting yields 15-20 sentence contexts") {
  GeneratorConfig g;
  g.num_notes = 4;
  const auto bundle = build_corpus(g, "paragraph");
  for (const auto& ex : bundle.examples) {
    CHECK(ex.context.size() >= 15);
    CHECK(ex.context.size() <= 20);
    CHECK(ex.setting == "paragraph");
    const auto text = ex.context_text();
    CHECK(text.substr(ex.answer.char_start, ex.answer.char_end - ex.answer.char_start) == ex.answer.text);
  }
  CHECK_THROWS_AS(build_corpus(g, "novel"), ConfigError);
}

namespace {

std::string temp_file(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("dataset: JSONL round trip and validation errors") {
  GeneratorConfig g;
  g.num_notes = 3;
  const auto bundle = build_corpus(g, "sentence");
  const auto path = temp_file("mtlqa_dataset_test.jsonl");
  write_dataset(bundle.examples, path);
  CHECK(read_dataset(path) == bundle.examples);

  auto j = example_to_json(bundle.examples[0]);
  j.erase("lf_id");
  try {
    example_from_json(j);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("lf_id") != std::string::npos);
  }

  {
    std::ofstream out(path);
    out << example_to_json(bundle.examples[0]).dump() << "\n";
    out << "{not json\n";
  }
  try {
    read_dataset(path);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST_CASE("gen: same flags produce identical corpora") {
  GeneratorConfig g;
  g.num_notes = 6;
  for (const char* setting : {"sentence", "paragraph"}) {
    const auto a = build_corpus(g, setting), b = build_corpus(g, setting);
    CHECK(a.examples == b.examples);
    CHECK(a.vocab == b.vocab);
  }
}
