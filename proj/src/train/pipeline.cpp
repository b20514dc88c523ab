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

#include "train/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "common/error.hpp"
#include "corpus/build.hpp"
#include "corpus/logical_form.hpp"
#include "split/splitter.hpp"
#include "tensor/checkpoint.hpp"
#include "text/tokenizer.hpp"
#include "train/gradcheck_suite.hpp"
#include "train/matrix.hpp"
#include "train/trainer.hpp"

namespace mtlqa::pipeline {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

std::string join(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<std::uint64_t> seeds_from(const Settings& s, const std::string& key, std::vector<std::uint64_t> fallback) {
  if (!s.has(key)) return fallback;
  const auto& v = s.values().at(key);
  if (!v.is_array()) throw ConfigError(key + " must be an array of integers");
  std::vector<std::uint64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < 0) throw ConfigError(key + " must hold non-negative integers");
    out.push_back(x.get<std::uint64_t>());
  }
  return out;
}

struct DataDir {
  std::vector<corpus::QAExample> examples;
  text::Vocab vocab;
  nlohmann::json info;
  std::size_t max_seq_len = 0;
};

DataDir read_data_dir(const std::string& dir) {
  DataDir d;
  d.info = read_json(join(dir, kCorpusInfoFile));
  d.examples = corpus::read_dataset(join(dir, kExamplesFile));
  d.vocab = text::Vocab::load(join(dir, kVocabFile));
  try {
    d.max_seq_len = d.info.at("max_seq_len").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("corpus info lacks max_seq_len: ") + e.what());
  }
  if (d.examples.empty()) throw DataError("data directory '" + dir + "' holds no examples");
  return d;
}

nlohmann::json data_fingerprint(const DataDir& d) {
  return {{"vocab_digest", d.info.value("vocab_digest", "")}, {"num_examples", d.examples.size()}};
}

// Loads split.json and checks it was cut from this data directory.
split::ExampleSets load_split(const DataDir& d, const std::string& split_path) {
  const auto j = read_json(split_path);
  if (!j.contains("data") || j["data"] != data_fingerprint(d)) {
    throw IntegrityError("split '" + split_path + "' was not made from this data directory");
  }
  return split::filter_examples(d.examples, split::assignment_from_json(j));
}

const std::vector<corpus::QAExample>& pick_split(const split::ExampleSets& sets, const std::string& name) {
  if (name == "train") return sets.train;
  if (name == "val") return sets.val;
  if (name == "test") return sets.test;
  throw ConfigError("unknown split name '" + name + "' (expected train, val or test)");
}

train::EncodedSet encode_for(const model::ModelConfig& mc, const std::vector<corpus::QAExample>& examples,
                             const text::Vocab& vocab, std::size_t max_seq_len, std::size_t negatives,
                             std::uint64_t seed) {
  if (mc.mode == model::Mode::kEvidence) {
    return train::encode_evidence_pairs(examples, vocab, max_seq_len, negatives, seed);
  }
  return train::encode_examples(examples, vocab, max_seq_len);
}

}  // namespace

void require_sections(const Settings& s, const std::vector<std::string>& sections) {
  for (const auto& [key, value] : s.values()) {
    const auto dot = key.find('.');
    const std::string section = dot == std::string::npos ? key : key.substr(0, dot);
    bool ok = false;
    for (const auto& name : sections) ok = ok || name == section;
    if (!ok) throw ConfigError("config key '" + key + "' is not used by this command");
  }
}

nlohmann::json gen_data(const Settings& s, const std::string& out_dir) {
  require_sections(s, {"gen"});
  s.require_known("gen.", {"seed", "num_notes", "facts_per_note", "distractor_rate", "decoration_rate", "setting",
                           "extra_names"});
  corpus::GeneratorConfig g;
  g.seed = static_cast<std::uint64_t>(s.get_int("gen.seed", 13));
  const long long notes = s.get_int("gen.num_notes", 100);
  if (notes < 1) throw ConfigError("gen.num_notes must be at least 1");
  g.num_notes = static_cast<std::size_t>(notes);
  const long long facts = s.get_int("gen.facts_per_note", 5);
  if (facts < 0) throw ConfigError("gen.facts_per_note must be non-negative");
  g.facts_per_note = static_cast<std::size_t>(facts);
  g.distractor_rate = s.get_double("gen.distractor_rate", 0.5);
  g.decoration_rate = s.get_double("gen.decoration_rate", 0.3);
  const long long extra = s.get_int("gen.extra_names", 200);
  if (extra < 0) throw ConfigError("gen.extra_names must be non-negative");
  g.lexicon = {static_cast<std::size_t>(extra), static_cast<std::size_t>(extra), static_cast<std::size_t>(extra),
               static_cast<std::size_t>(extra)};
  const std::string setting = s.get_string("gen.setting", "sentence");

  ensure_dir(out_dir);
  const auto bundle = corpus::build_corpus(g, setting);
  corpus::write_dataset(bundle.examples, join(out_dir, kExamplesFile));
  {
    std::ofstream notes_out(join(out_dir, kNotesFile));
    if (!notes_out) throw IoError("cannot write notes file in '" + out_dir + "'");
    for (const auto& n : bundle.notes) notes_out << corpus::note_to_json(n).dump() << '\n';
  }
  bundle.gazetteer.save(join(out_dir, kGazetteerFile));
  bundle.vocab.save(join(out_dir, kVocabFile));

  const std::size_t max_len = setting == "paragraph" ? text::kParagraphSeqLen : text::kSentenceSeqLen;
  nlohmann::json resolved = {{"gen.seed", g.seed},
                             {"gen.num_notes", g.num_notes},
                             {"gen.facts_per_note", g.facts_per_note},
                             {"gen.distractor_rate", g.distractor_rate},
                             {"gen.decoration_rate", g.decoration_rate},
                             {"gen.extra_names", extra},
                             {"gen.setting", setting}};
  nlohmann::json info = {{"setting", setting},
                         {"max_seq_len", max_len},
                         {"num_notes", bundle.notes.size()},
                         {"num_examples", bundle.examples.size()},
                         {"skipped_slots", bundle.stats.skipped_slots},
                         {"vocab_size", bundle.vocab.size()},
                         {"vocab_digest", hex64(bundle.vocab.digest())},
                         {"gazetteer_entries", bundle.gazetteer.size()},
                         {"settings", resolved}};
  write_text(join(out_dir, kCorpusInfoFile), info.dump(2) + "\n");
  return info;
}

nlohmann::json split(const Settings& s, const std::string& data_dir, const std::string& out_dir) {
  require_sections(s, {"split"});
  s.require_known("split.", {"mode", "train_frac", "seed", "val_frac", "test_frac"});
  const auto mode = split::parse_mode(s.get_string("split.mode", "pl"));
  const double frac = s.get_double("split.train_frac", 0.7);
  const auto seed = static_cast<std::uint64_t>(s.get_int("split.seed", 0));
  const double val = s.get_double("split.val_frac", 0.15), test = s.get_double("split.test_frac", 0.15);
  const std::array<double, 3> ratios{1.0 - val - test, val, test};

  const auto data = read_data_dir(data_dir);
  ensure_dir(out_dir);
  const auto assignment =
      split::make_assignment(data.examples, corpus::default_question_templates(), mode, frac, seed, ratios);
  const auto sets = split::filter_examples(data.examples, assignment);
  const auto audit = split::audit(sets);

  auto manifest = split::assignment_to_json(assignment);
  manifest["data"] = data_fingerprint(data);
  write_text(join(out_dir, "split.json"), manifest.dump(2) + "\n");
  for (const char* name : {"train", "val", "test"}) {
    std::string ids;
    for (const auto& ex : pick_split(sets, name)) ids += ex.id + "\n";
    write_text((fs::path(out_dir) / (std::string(name) + "_ids.txt")).string(), ids);
  }
  nlohmann::json summary = {
      {"settings",
       {{"split.mode", split::mode_name(mode)}, {"split.train_frac", frac}, {"split.seed", seed},
        {"split.val_frac", val}, {"split.test_frac", test}}},
      {"counts", {{"train", sets.train.size()}, {"val", sets.val.size()}, {"test", sets.test.size()}}},
      {"audit", {{"template_overlap", audit.template_overlap}, {"note_overlap", audit.note_overlap}}},
      {"templates", manifest["templates"]}};
  if (audit.note_overlap != 0 || (mode == split::SplitMode::kParaphrase && audit.template_overlap != 0)) {
    throw InvariantError("leakage audit failed: " + summary["audit"].dump());
  }
  return summary;
}

nlohmann::json train(const Settings& s, const std::string& data_dir, const std::string& split_path,
                     const std::string& out_dir) {
  require_sections(s, {"model", "train", "data"});
  s.require_known("data.", {"negatives"});
  const auto data = read_data_dir(data_dir);
  const auto sets = load_split(data, split_path);

  auto tc = train::TrainConfig::from_settings(s);
  auto mc = model::ModelConfig::from_settings(s);
  mc.vocab_size = data.vocab.size();
  mc.vocab_digest = data.vocab.digest();
  mc.max_positions = std::max(mc.max_positions, data.max_seq_len);
  mc.init_seed = tc.seed;
  mc = train::configure_for_system(mc, tc.system);
  const long long negatives = s.get_int("data.negatives", 3);
  if (negatives < 1) throw ConfigError("data.negatives must be at least 1");
  if (mc.mode == model::Mode::kEvidence && data.info.value("setting", "") != "paragraph") {
    throw ConfigError("the evidence system needs a paragraph-setting corpus");
  }

  const auto train_set = encode_for(mc, sets.train, data.vocab, data.max_seq_len,
                                    static_cast<std::size_t>(negatives), derive_seed(tc.seed, 1));
  const auto val_set = encode_for(mc, sets.val, data.vocab, data.max_seq_len, static_cast<std::size_t>(negatives),
                                  derive_seed(tc.seed, 2));

  ensure_dir(out_dir);
  const auto result =
      train::train(train_set, val_set, mc, tc, {join(out_dir, kCheckpointFile), join(out_dir, kTrainLogFile)});

  nlohmann::json cfg = {{"model", mc.to_json()},
                        {"train", tc.to_json()},
                        {"data",
                         {{"max_seq_len", data.max_seq_len},
                          {"setting", data.info.value("setting", "")},
                          {"negatives", negatives},
                          {"pair_seed", tc.seed}}},
                        {"config_digest", hex64(mc.digest())}};
  write_text(join(out_dir, kModelConfigFile), cfg.dump(2) + "\n");
  data.vocab.save(join(out_dir, kVocabFile));
  fs::copy_file(join(data_dir, kGazetteerFile), join(out_dir, kGazetteerFile), fs::copy_options::overwrite_existing);

  const auto val_report = train::evaluate(result.model, val_set);
  nlohmann::json resolved = s.to_json();
  const auto train_json = tc.to_json(), model_json = mc.to_json();
  for (const auto& [k, v] : train_json.items()) resolved["train." + k] = v;
  for (const char* k : {"hidden_dim", "layers", "heads", "ffn_dim", "use_entities", "entity_dim", "entity_layers",
                        "entity_heads", "omega", "dropout", "max_answer_len", "mode"}) {
    resolved[std::string("model.") + k] = model_json.at(k);
  }
  resolved["data.negatives"] = negatives;
  return {{"settings", resolved},
          {"seed", tc.seed},
          {"steps", result.steps},
          {"best_step", result.best_step},
          {"best_validation", result.best_validation},
          {"train_examples", train_set.size()},
          {"val_examples", val_set.size()},
          {"dropped_answers", train_set.dropped + val_set.dropped},
          {"validation", metrics::report_to_json(val_report)}};
}

LoadedModel load_model(const std::string& model_dir) {
  LoadedModel m;
  m.config_json = read_json(join(model_dir, kModelConfigFile));
  model::ModelConfig mc;
  try {
    mc = model::ModelConfig::from_json(m.config_json.at("model"));
    m.max_seq_len = m.config_json.at("data").at("max_seq_len").get<std::size_t>();
    m.negatives = m.config_json.at("data").at("negatives").get<std::size_t>();
    m.pair_seed = m.config_json.at("data").at("pair_seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("malformed model config: ") + e.what());
  }
  m.vocab = text::Vocab::load(join(model_dir, kVocabFile));
  if (m.vocab.digest() != mc.vocab_digest) {
    throw IntegrityError("model vocabulary digest " + hex64(m.vocab.digest()) + " differs from configured " +
                         hex64(mc.vocab_digest));
  }
  m.gazetteer = text::Gazetteer::load(join(model_dir, kGazetteerFile));
  m.model = std::make_unique<model::Model>(mc);
  load_checkpoint(join(model_dir, kCheckpointFile), m.model->params(), mc.digest());
  return m;
}

nlohmann::json eval(const std::string& model_dir, const std::string& data_dir, const std::string& split_path,
                    const std::string& split_name) {
  const auto m = load_model(model_dir);
  const auto data = read_data_dir(data_dir);
  const auto& mc = m.model->config();
  if (data.vocab.digest() != mc.vocab_digest) {
    throw IntegrityError("data vocabulary digest " + hex64(data.vocab.digest()) + " does not match model digest " +
                         hex64(mc.vocab_digest));
  }
  std::vector<corpus::QAExample> chosen;
  if (split_path.empty()) {
    chosen = data.examples;
  } else {
    const auto sets = load_split(data, split_path);
    chosen = pick_split(sets, split_name.empty() ? "test" : split_name);
  }
  if (chosen.empty()) throw InvariantError("the selected split is empty");
  const auto set = encode_for(mc, chosen, data.vocab, data.max_seq_len, m.negatives, derive_seed(m.pair_seed, 3));
  auto report = metrics::report_to_json(train::evaluate(*m.model, set));
  report["split"] = split_path.empty() ? "all" : (split_name.empty() ? "test" : split_name);
  report["system"] = m.config_json["train"].value("system", "");
  return report;
}

nlohmann::json gradcheck(const Settings& s) {
  require_sections(s, {"gradcheck"});
  s.require_known("gradcheck.", {"seeds", "tolerance"});
  const auto seeds = seeds_from(s, "gradcheck.seeds", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const double tol = s.get_double("gradcheck.tolerance", 1e-4);
  if (seeds.empty()) throw ConfigError("gradcheck.seeds must name at least one seed");
  if (!(tol > 0.0)) throw ConfigError("gradcheck.tolerance must be positive");
  auto j = train::run_gradcheck_suite(seeds, tol).to_json();
  j["settings"] = {{"gradcheck.seeds", seeds}, {"gradcheck.tolerance", tol}};
  return j;
}

nlohmann::json run_matrix(const Settings& s, const std::string& data_dir, const std::string& out_dir) {
  require_sections(s, {"model", "train", "matrix"});
  s.require_known("matrix.", {"seeds", "train_frac"});
  const auto data = read_data_dir(data_dir);
  train::MatrixConfig mcfg;
  mcfg.seeds = seeds_from(s, "matrix.seeds", {1, 2, 3});
  mcfg.train_frac = s.get_double("matrix.train_frac", 0.7);
  mcfg.vocab = data.vocab;
  mcfg.model = model::ModelConfig::from_settings(s);
  mcfg.train = train::TrainConfig::from_settings(s);
  mcfg.max_seq_len = data.max_seq_len;

  ensure_dir(out_dir);
  const auto result = train::run_matrix(data.examples, corpus::default_question_templates(), mcfg);
  write_text(join(out_dir, "matrix.csv"), result.csv());
  write_text(join(out_dir, "matrix.txt"), result.text());
  auto j = result.to_json();
  write_text(join(out_dir, "matrix.json"), j.dump(2) + "\n");
  j["text"] = result.text();
  nlohmann::json resolved = {{"matrix.seeds", mcfg.seeds}, {"matrix.train_frac", mcfg.train_frac}};
  const auto train_json = mcfg.train.to_json(), model_json = mcfg.model.to_json();
  for (const auto& [k, v] : train_json.items()) resolved["train." + k] = v;
  for (const auto& [k, v] : model_json.items()) {
    if (k != "vocab_size" && k != "vocab_digest" && k != "init_seed" && k != "entity_vocab_size" &&
        k != "num_lf_classes") {
      resolved["model." + k] = v;
    }
  }
  j["settings"] = resolved;
  return j;
}

nlohmann::json answer(const LoadedModel& m, const std::string& question, const std::string& context) {
  const auto& mc = m.model->config();
  if (mc.mode != model::Mode::kSpan) throw ConfigError("answering needs a span-mode model");
  const auto pair = text::encode_pair(question, text::tag_entities(question, m.gazetteer), context,
                                      text::tag_entities(context, m.gazetteer), std::nullopt, m.vocab, m.max_seq_len);
  if (pair.context_end <= pair.context_begin) throw InvariantError("context is empty after encoding");
  const text::EncodedPair* ptr = &pair;
  const auto batch = model::make_batch(std::span(&ptr, 1), {});
  const auto out = m.model->forward(batch, nullptr);
  std::vector<bool> allowed(batch.len, false);
  for (std::size_t t = pair.context_begin; t < pair.context_end && t < batch.len; ++t) allowed[t] = true;
  const auto [st, en] = model::decode_span(out.start_logits.data(), out.end_logits.data(), allowed, mc.max_answer_len);
  const auto chars = text::token_span_to_chars(pair, st, en);
  const auto lf = out.lf_logits.data();
  const int lf_id = static_cast<int>(std::max_element(lf.begin(), lf.end()) - lf.begin());
  return {{"answer", context.substr(chars.start, chars.end - chars.start)},
          {"start", chars.start},
          {"end", chars.end},
          {"lf_id", lf_id},
          {"lf", corpus::lf_inventory().at(static_cast<std::size_t>(lf_id)).lf_string}};
}

}  // namespace mtlqa::pipeline
