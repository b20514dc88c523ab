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

#include <string>
#include <vector>

#include "corpus/dataset.hpp"
#include "corpus/generator.hpp"
#include "corpus/lexicon.hpp"
#include "text/entities.hpp"
#include "text/vocab.hpp"

namespace mtlqa::corpus {

struct CorpusBundle {
  Lexicon lexicon;
  text::Gazetteer gazetteer;
  std::vector<Note> notes;
  std::vector<QAExample> examples;
  InstantiationStats stats;
  text::Vocab vocab;
};

// End-to-end generation for one setting ("sentence" or "paragraph"). Paragraph
// notes are padded to at least 21 sentences and each example gets its own
// window RNG derived from the seed and its position.
CorpusBundle build_corpus(GeneratorConfig config, const std::string& setting);

// Vocabulary over every question and context token of `examples`.
text::Vocab build_vocab(const std::vector<QAExample>& examples);

}  // namespace mtlqa::corpus
