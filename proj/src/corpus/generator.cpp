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

#include "corpus/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "common/error.hpp"
#include "corpus/logical_form.hpp"

namespace mtlqa::corpus {

const Mention* Fact::find(Role r) const {
  for (const auto& m : mentions) {
    if (m.role == r) return &m;
  }
  return nullptr;
}

namespace {

Role role_from_name(const std::string& name) {
  for (Role r : {Role::kMedication, Role::kDosage, Role::kSig, Role::kProblem, Role::kProcedure, Role::kSymptom}) {
    if (name == role_name(r)) return r;
  }
  throw DataError("unknown role '" + name + "'");
}

bool role_placeholder(const std::string& name, Role& out) {
  for (Role r : {Role::kMedication, Role::kDosage, Role::kSig, Role::kProblem, Role::kProcedure, Role::kSymptom}) {
    if (name == role_name(r)) {
      out = r;
      return true;
    }
  }
  return false;
}

struct Rendered {
  std::string text;
  std::vector<Mention> mentions;
};

// Fills {placeholders}. Roles present in `values` become mentions; other role
// placeholders draw a value outside `exclude`; type-code placeholders draw
// from the background lexicon.
Rendered render(const std::string& pattern, const std::vector<std::pair<Role, std::string>>& values,
                const Lexicon& lexicon, const std::set<std::string>& exclude, Rng& rng) {
  Rendered out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] != '{') {
      out.text.push_back(pattern[i++]);
      continue;
    }
    const auto close = pattern.find('}', i);
    if (close == std::string::npos) throw ConfigError("unterminated placeholder in '" + pattern + "'");
    const std::string name = pattern.substr(i + 1, close - i - 1);
    i = close + 1;

    Role role;
    if (role_placeholder(name, role)) {
      auto it = std::find_if(values.begin(), values.end(), [&](const auto& v) { return v.first == role; });
      if (it != values.end()) {
        const std::size_t start = out.text.size();
        out.text += it->second;
        out.mentions.push_back({role, it->second, start, out.text.size()});
        continue;
      }
      const auto& pool = role == Role::kProblem ? lexicon.conditions : lexicon.for_role(role);
      for (int attempt = 0;; ++attempt) {
        const auto& cand = rng.pick(pool).surface;
        if (!exclude.count(cand) || attempt > 1000) {
          out.text += cand;
          break;
        }
      }
      continue;
    }
    auto bg = lexicon.background.find(name);
    if (bg == lexicon.background.end() || bg->second.empty()) {
      throw ConfigError("placeholder {" + name + "} has no vocabulary");
    }
    out.text += rng.pick(bg->second);
  }
  return out;
}

std::string draw_unused(const std::vector<LexEntry>& pool, std::set<std::string>& used, Rng& rng, const char* what) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto& cand = rng.pick(pool).surface;
    if (used.insert(cand).second) return cand;
  }
  for (const auto& e : pool) {
    if (used.insert(e.surface).second) return e.surface;
  }
  throw ConfigError(std::string("slot vocabulary for ") + what + " is exhausted within a note");
}

std::string render_distractor_excluding(const Lexicon& lexicon, Rng& rng, const std::set<std::string>& exclude) {
  return render(rng.pick(distractor_patterns()), {}, lexicon, exclude, rng).text;
}

std::string lowercase(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::string example_id(int note_id, std::size_t fact, int template_id) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "n%06d-f%02zu-t%03d", note_id, fact, template_id);
  return buf;
}

}  // namespace

nlohmann::json note_to_json(const Note& n) {
  nlohmann::json facts = nlohmann::json::array();
  for (const auto& f : n.facts) {
    nlohmann::json mentions = nlohmann::json::array();
    for (const auto& m : f.mentions) {
      mentions.push_back({{"role", role_name(m.role)}, {"text", m.text}, {"start", m.char_start}, {"end", m.char_end}});
    }
    facts.push_back({{"kind", fact_kind_name(f.kind)}, {"sentence_index", f.sentence_index}, {"mentions", mentions}});
  }
  return {{"note_id", n.note_id}, {"sentences", n.sentences}, {"facts", facts}};
}

Note note_from_json(const nlohmann::json& j) {
  try {
    Note n;
    n.note_id = j.at("note_id").get<int>();
    n.sentences = j.at("sentences").get<std::vector<std::string>>();
    for (const auto& fj : j.at("facts")) {
      Fact f;
      f.kind = fact_kind_from_name(fj.at("kind").get<std::string>());
      f.sentence_index = fj.at("sentence_index").get<std::size_t>();
      if (f.sentence_index >= n.sentences.size()) throw DataError("fact sentence_index outside the note");
      for (const auto& mj : fj.at("mentions")) {
        f.mentions.push_back({role_from_name(mj.at("role").get<std::string>()), mj.at("text").get<std::string>(),
                              mj.at("start").get<std::size_t>(), mj.at("end").get<std::size_t>()});
      }
      n.facts.push_back(std::move(f));
    }
    return n;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed note record: ") + e.what());
  }
}

std::string render_distractor(const Lexicon& lexicon, Rng& rng) { return render_distractor_excluding(lexicon, rng, {}); }

std::vector<Note> generate_corpus(const GeneratorConfig& config, const Lexicon& lexicon) {
  if (config.num_notes < 1) throw ConfigError("num_notes must be at least 1");
  if (config.distractor_rate < 0.0 || config.distractor_rate > 1.0) {
    throw ConfigError("distractor_rate must lie in [0, 1]");
  }
  for (Role r : {Role::kMedication, Role::kDosage, Role::kSig, Role::kProblem, Role::kProcedure, Role::kSymptom}) {
    if (lexicon.for_role(r).empty()) {
      throw ConfigError(std::string("slot vocabulary for ") + role_name(r) + " is empty");
    }
  }

  std::vector<Note> notes;
  notes.reserve(config.num_notes);
  for (std::size_t n = 0; n < config.num_notes; ++n) {
    Rng rng(derive_seed(config.seed, n));
    Note note;
    note.note_id = static_cast<int>(n);
    std::set<std::string> used;

    std::vector<std::pair<std::string, int>> pending;  // sentence, fact index or -1
    for (std::size_t f = 0; f < config.facts_per_note; ++f) {
      Fact fact;
      fact.kind = static_cast<FactKind>(rng.below(kNumFactKinds));
      std::vector<std::pair<Role, std::string>> values;
      for (Role r : fact_roles(fact.kind)) {
        switch (r) {
          case Role::kDosage:
          case Role::kSig:
            values.emplace_back(r, rng.pick(lexicon.for_role(r)).surface);
            break;
          case Role::kProblem: {
            const bool symptom = rng.bernoulli(0.2);
            values.emplace_back(r, draw_unused(symptom ? lexicon.symptoms : lexicon.conditions, used, rng, "problem"));
            break;
          }
          default:
            values.emplace_back(r, draw_unused(lexicon.for_role(r), used, rng, role_name(r)));
        }
      }
      std::string pattern = rng.pick(sentence_patterns(fact.kind));
      if (rng.bernoulli(config.decoration_rate)) pattern = rng.pick(decoration_prefixes()) + pattern;
      auto rendered = render(pattern, values, lexicon, used, rng);
      fact.mentions = std::move(rendered.mentions);
      pending.emplace_back(std::move(rendered.text), static_cast<int>(f));
      note.facts.push_back(std::move(fact));
    }

    std::size_t distractors = 0;
    for (std::size_t k = 0; k < 2 * config.facts_per_note; ++k) distractors += rng.bernoulli(config.distractor_rate);
    while (pending.size() < config.facts_per_note + distractors || pending.size() < config.min_note_sentences) {
      pending.emplace_back(render_distractor_excluding(lexicon, rng, used), -1);
    }

    rng.shuffle(pending);
    for (std::size_t s = 0; s < pending.size(); ++s) {
      if (pending[s].second >= 0) note.facts[static_cast<std::size_t>(pending[s].second)].sentence_index = s;
      note.sentences.push_back(std::move(pending[s].first));
    }
    notes.push_back(std::move(note));
  }
  return notes;
}

std::vector<QAExample> instantiate_questions(const std::vector<Note>& notes,
                                             const std::vector<QuestionTemplate>& templates,
                                             const text::Gazetteer& gazetteer, InstantiationStats* stats) {
  InstantiationStats local;
  std::vector<QAExample> out;
  const auto& inventory = lf_inventory();

  for (const auto& note : notes) {
    for (std::size_t fi = 0; fi < note.facts.size(); ++fi) {
      const auto& fact = note.facts[fi];
      const auto& sentence = note.sentences.at(fact.sentence_index);
      const auto context_tags = text::tag_entities(sentence, gazetteer);
      for (const auto& tpl : templates) {
        if (tpl.lf_id < 0 || tpl.lf_id >= static_cast<int>(inventory.size())) {
          throw ConfigError("template " + std::to_string(tpl.template_id) + " names unknown logical form " +
                            std::to_string(tpl.lf_id));
        }
        const auto& bindings = lf_bindings(tpl.lf_id);
        auto b = std::find_if(bindings.begin(), bindings.end(), [&](const LfBinding& x) { return x.kind == fact.kind; });
        if (b == bindings.end()) continue;

        const auto lf_slot_names = lf_slots(inventory[static_cast<std::size_t>(tpl.lf_id)]);
        const Mention* slot_value = fact.find(b->slot_role);
        const Mention* answer = fact.find(b->answer_role);
        std::string question = tpl.pattern;
        bool filled = slot_value != nullptr && answer != nullptr;
        for (const auto& slot : template_slots(tpl.pattern)) {
          if (std::find(lf_slot_names.begin(), lf_slot_names.end(), slot) == lf_slot_names.end()) filled = false;
          if (!filled) break;
          const std::string marker = "|" + slot + "|";
          question.replace(question.find(marker), marker.size(), slot_value->text);
        }
        if (!filled) {
          ++local.skipped_slots;
          continue;
        }

        QAExample ex;
        ex.id = example_id(note.note_id, fi, tpl.template_id);
        ex.note_id = note.note_id;
        ex.fact_index = fi;
        ex.setting = "sentence";
        ex.question = lowercase(question);
        ex.question_template_id = tpl.template_id;
        ex.lf_id = tpl.lf_id;
        ex.context = {sentence};
        ex.evidence_index = 0;
        ex.answer = {0, answer->char_start, answer->char_end, answer->text};
        ex.question_entities = text::tag_entities(ex.question, gazetteer);
        ex.context_entities = context_tags;
        out.push_back(std::move(ex));
        ++local.emitted;
      }
    }
  }
  if (stats) *stats = local;
  return out;
}

ParagraphWindow draw_paragraph_window(Rng& rng) {
  ParagraphWindow w;
  w.length = static_cast<std::size_t>(rng.range(15, 20));
  w.before = static_cast<std::size_t>(rng.below(w.length));
  return w;
}

QAExample build_paragraph_context(const QAExample& example, const Note& note, const Lexicon& lexicon,
                                  const text::Gazetteer& gazetteer, Rng& rng) {
  const auto w = draw_paragraph_window(rng);
  return build_paragraph_context(example, note, lexicon, gazetteer, rng, w);
}

QAExample build_paragraph_context(const QAExample& example, const Note& note, const Lexicon& lexicon,
                                  const text::Gazetteer& gazetteer, Rng& rng, ParagraphWindow window) {
  if (example.fact_index >= note.facts.size()) {
    throw InvariantError("example " + example.id + " refers to fact " + std::to_string(example.fact_index) +
                         " outside note " + std::to_string(note.note_id));
  }
  const std::size_t evidence = note.facts[example.fact_index].sentence_index;
  if (evidence >= note.sentences.size()) {
    throw InvariantError("evidence sentence " + std::to_string(evidence) + " outside note " +
                         std::to_string(note.note_id));
  }
  if (window.length == 0 || window.before >= window.length) {
    throw InvariantError("paragraph window must satisfy before < length");
  }
  const std::size_t after = window.length - window.before - 1;

  std::set<std::string> exclude;
  for (const auto& f : note.facts) {
    for (const auto& m : f.mentions) exclude.insert(m.text);
  }

  QAExample ex = example;
  ex.setting = "paragraph";
  ex.context.clear();
  const long long first = static_cast<long long>(evidence) - static_cast<long long>(window.before);
  for (long long i = first; i <= static_cast<long long>(evidence + after); ++i) {
    if (i < 0 || i >= static_cast<long long>(note.sentences.size())) {
      ex.context.push_back(render_distractor_excluding(lexicon, rng, exclude));
    } else {
      ex.context.push_back(note.sentences[static_cast<std::size_t>(i)]);
    }
  }
  const std::size_t local_start = example.answer.char_start - example.sentence_offset(example.evidence_index);
  const std::size_t local_end = example.answer.char_end - example.sentence_offset(example.evidence_index);
  ex.evidence_index = window.before;
  const std::size_t base = ex.sentence_offset(window.before);
  ex.answer = {window.before, base + local_start, base + local_end, example.answer.text};
  ex.context_entities = text::tag_entities(ex.context_text(), gazetteer);
  return ex;
}

}  // namespace mtlqa::corpus
