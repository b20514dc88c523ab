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
#include <vector>

#include <json.hpp>

#include "common/rng.hpp"
#include "corpus/dataset.hpp"
#include "corpus/lexicon.hpp"
#include "corpus/templates.hpp"

namespace mtlqa::corpus {

struct Mention {
  Role role;
  std::string text;
  std::size_t char_start = 0;  // within the fact's sentence
  std::size_t char_end = 0;
};

struct Fact {
  FactKind kind = FactKind::kPrescription;
  std::size_t sentence_index = 0;
  std::vector<Mention> mentions;

  const Mention* find(Role r) const;
};

struct Note {
  int note_id = 0;
  std::vector<std::string> sentences;
  std::vector<Fact> facts;
};

nlohmann::json note_to_json(const Note& n);
Note note_from_json(const nlohmann::json& j);

struct GeneratorConfig {
  std::uint64_t seed = 13;
  std::size_t num_notes = 100;
  std::size_t facts_per_note = 5;
  double distractor_rate = 0.5;
  // Notes shorter than this are padded with distractors (21 for paragraph contexts).
  std::size_t min_note_sentences = 0;
  // Probability that a fact sentence gets a leading background clause.
  double decoration_rate = 0.3;
  LexiconSizes lexicon{};
};

// Deterministic in config.seed; note i uses an RNG stream derived from (seed, i).
// Each note carries facts_per_note fact sentences and Binomial(2 * facts_per_note,
// distractor_rate) distractors, shuffled together.
std::vector<Note> generate_corpus(const GeneratorConfig& config, const Lexicon& lexicon);

struct InstantiationStats {
  std::size_t emitted = 0;
  std::size_t skipped_slots = 0;  // template slot with no matching fact element
};

// Sentence-setting examples: one per (fact, compatible template). The context
// is the fact's sentence alone.
std::vector<QAExample> instantiate_questions(const std::vector<Note>& notes,
                                             const std::vector<QuestionTemplate>& templates,
                                             const text::Gazetteer& gazetteer, InstantiationStats* stats = nullptr);

struct ParagraphWindow {
  std::size_t length = 0;  // total sentences, in [15, 20]
  std::size_t before = 0;  // sentences preceding the evidence sentence, < length
};

ParagraphWindow draw_paragraph_window(Rng& rng);

// Rebuilds `example` with a window of `length` sentences from `note` in which
// the evidence sentence is preceded by `before` sentences. Missing neighbours
// at the note boundaries are filled with fresh distractor sentences.
QAExample build_paragraph_context(const QAExample& example, const Note& note, const Lexicon& lexicon,
                                  const text::Gazetteer& gazetteer, Rng& rng);
QAExample build_paragraph_context(const QAExample& example, const Note& note, const Lexicon& lexicon,
                                  const text::Gazetteer& gazetteer, Rng& rng, ParagraphWindow window);

std::string render_distractor(const Lexicon& lexicon, Rng& rng);

}  // namespace mtlqa::corpus
