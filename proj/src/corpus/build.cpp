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

#include "corpus/build.hpp"

#include <map>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "text/tokenizer.hpp"

namespace mtlqa::corpus {

CorpusBundle build_corpus(GeneratorConfig config, const std::string& setting) {
  if (setting != "sentence" && setting != "paragraph") {
    throw ConfigError("unknown setting '" + setting + "' (expected sentence or paragraph)");
  }
  const bool paragraph = setting == "paragraph";
  if (paragraph) config.min_note_sentences = std::max<std::size_t>(config.min_note_sentences, 21);

  CorpusBundle b;
  b.lexicon = build_lexicon(config.lexicon, config.seed);
  b.gazetteer = b.lexicon.gazetteer();
  b.notes = generate_corpus(config, b.lexicon);
  b.examples = instantiate_questions(b.notes, default_question_templates(), b.gazetteer, &b.stats);
  if (paragraph) {
    std::map<int, const Note*> by_id;
    for (const auto& n : b.notes) by_id[n.note_id] = &n;
    for (std::size_t i = 0; i < b.examples.size(); ++i) {
      Rng rng(derive_seed(config.seed ^ 0x9a7a, i));
      b.examples[i] = build_paragraph_context(b.examples[i], *by_id.at(b.examples[i].note_id), b.lexicon,
                                              b.gazetteer, rng);
    }
  }
  b.vocab = build_vocab(b.examples);
  return b;
}

text::Vocab build_vocab(const std::vector<QAExample>& examples) {
  std::vector<std::vector<std::string>> streams;
  streams.reserve(examples.size() * 2);
  auto texts = [](const std::vector<text::Token>& toks) {
    std::vector<std::string> out;
    out.reserve(toks.size());
    for (const auto& t : toks) out.push_back(t.text);
    return out;
  };
  for (const auto& ex : examples) {
    streams.push_back(texts(text::tokenize(ex.question)));
    for (const auto& s : ex.context) streams.push_back(texts(text::tokenize(s)));
  }
  return text::Vocab::build(streams, 1);
}

}  // namespace mtlqa::corpus
