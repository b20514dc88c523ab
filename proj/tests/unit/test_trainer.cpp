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

#include <cmath>
#include <filesystem>
#include <fstream>

#include "common/error.hpp"
#include "corpus/build.hpp"
#include "split/splitter.hpp"
#include "tensor/checkpoint.hpp"
#include "train/matrix.hpp"
#include "train/trainer.hpp"

using namespace mtlqa;
using namespace mtlqa::train;

namespace {

struct Data {
  corpus::CorpusBundle bundle;
  EncodedSet train_set, val_set;
  Data() {
    corpus::GeneratorConfig g;
    g.num_notes = 12;
    bundle = corpus::build_corpus(g, "sentence");
    const auto a = split::make_assignment(bundle.examples, corpus::default_question_templates(),
                                          split::SplitMode::kParaphrase, 0.7, 1, {0.6, 0.2, 0.2});
    const auto sets = split::filter_examples(bundle.examples, a);
    train_set = encode_examples(sets.train, bundle.vocab, text::kSentenceSeqLen);
    val_set = encode_examples(sets.val, bundle.vocab, text::kSentenceSeqLen);
  }
  model::ModelConfig model(double omega = 0.3) const {
    model::ModelConfig c;
    c.vocab_size = bundle.vocab.size();
    c.vocab_digest = bundle.vocab.digest();
    c.hidden_dim = 16;
    c.layers = 1;
    c.heads = 2;
    c.entity_dim = 8;
    c.entity_heads = 2;
    c.omega = omega;
    return c;
  }
  TrainConfig config() const {
    TrainConfig t;
    t.lr = 1e-3;
    t.epochs = 1;
    t.max_steps = 12;
    t.eval_every = 6;
    t.seed = 4;
    return t;
  }
};

const Data& data() {
  static const Data d;
  return d;
}

EncodedSet take(const EncodedSet& s, std::size_t n) {
  EncodedSet out;
  for (std::size_t i = 0; i < n && i < s.size(); ++i) {
    out.pairs.push_back(s.pairs[i]);
    out.lf.push_back(s.lf[i]);
    out.contexts.push_back(s.contexts[i]);
    out.answers.push_back(s.answers[i]);
  }
  return out;
}

std::filesystem::path scratch(const char* name) {
  auto p = std::filesystem::temp_directory_path() / (std::string("mtlqa_trainer_") + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("lr_at: warmup then linear decay") {
  TrainConfig c;
  CHECK(lr_at(0, 1000, c) == 0.0);
  CHECK(lr_at(100, 1000, c) == doctest::Approx(2e-5).epsilon(1e-12));
  CHECK(lr_at(550, 1000, c) == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(lr_at(1000, 1000, c) == doctest::Approx(0.0));
  CHECK(lr_at(50, 1000, c) == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK_THROWS_AS(lr_at(0, 0, c), ConfigError);
  c.warmup_frac = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("configure_for_system: architecture and loss per system") {
  model::ModelConfig base;
  CHECK_FALSE(configure_for_system(base, System::kBaseline).use_entities);
  CHECK(configure_for_system(base, System::kBaseline).omega == 0.0);
  CHECK(configure_for_system(base, System::kFused).use_entities);
  CHECK(configure_for_system(base, System::kFused).omega == 0.0);
  CHECK(configure_for_system(base, System::kMultitask).omega == 0.3);
  CHECK(configure_for_system(base, System::kEvidence).mode == model::Mode::kEvidence);
  base.omega = 0.0;
  CHECK_THROWS_AS(configure_for_system(base, System::kMultitask), ConfigError);
  CHECK_THROWS_AS(parse_system("bert"), ConfigError);
}

TEST_CASE("train: identical seeds give identical loss curves and weights") {
  const auto& d = data();
  const auto a = train::train(d.train_set, d.val_set, d.model(), d.config());
  const auto b = train::train(d.train_set, d.val_set, d.model(), d.config());
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].total == b.log[i].total);
    CHECK(a.log[i].lr == b.log[i].lr);
  }
  for (std::size_t i = 0; i < a.model.params().size(); ++i) {
    const auto x = a.model.params().entries()[i].tensor.data();
    const auto y = b.model.params().entries()[i].tensor.data();
    CHECK(std::equal(x.begin(), x.end(), y.begin()));
  }
  auto other = d.config();
  other.seed = 5;
  const auto c = train::train(d.train_set, d.val_set, d.model(), other);
  CHECK(c.log[0].total != a.log[0].total);
}

TEST_CASE("train: omega zero logs L_lf without training the LF head") {
  const auto& d = data();
  const auto r = train::train(d.train_set, d.val_set, d.model(0.0), d.config());
  for (const auto& rec : r.log) {
    CHECK(std::isfinite(rec.lf_loss));
    CHECK(rec.total == rec.main_loss);
  }
  model::Model fresh(d.model(0.0));
  const auto w0 = fresh.params().get("lf.w").data();
  const auto w1 = r.model.params().get("lf.w").data();
  // Only decoupled weight decay touches the LF head.
  for (std::size_t i = 0; i < w0.size(); ++i) CHECK(std::abs(w1[i] - w0[i]) <= std::abs(w0[i]) * 1e-3);
}

TEST_CASE("train: best checkpoint is never worse than an earlier saved one") {
  const auto& d = data();
  auto cfg = d.config();
  cfg.max_steps = 30;
  cfg.eval_every = 3;
  const auto dir = scratch("best");
  const auto r = train::train(d.train_set, d.val_set, d.model(), cfg,
                       {(dir / "m.ckpt").string(), (dir / "log.jsonl").string()});
  REQUIRE(!r.validation_history.empty());
  CHECK(r.best_validation == *std::max_element(r.validation_history.begin(), r.validation_history.end()));
  CHECK(selection_metric(evaluate(r.model, d.val_set), model::Mode::kSpan) == doctest::Approx(r.best_validation));
  CHECK(std::filesystem::exists(dir / "m.ckpt"));

  // Saved weights reproduce the returned model.
  model::Model reloaded(r.model.config());
  load_checkpoint((dir / "m.ckpt").string(), reloaded.params(), r.model.config().digest());
  CHECK(evaluate(reloaded, d.val_set).token_f1 == doctest::Approx(*evaluate(r.model, d.val_set).token_f1).epsilon(1e-4));

  std::ifstream log(dir / "log.jsonl");
  std::string line;
  std::size_t n = 0;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("step"));
    CHECK(j.contains("lr"));
    CHECK(j.contains("L_span"));
    CHECK(j.contains("L_lf"));
    CHECK(j.contains("L_total"));
    ++n;
  }
  CHECK(n == r.log.size());
}

TEST_CASE("train: non-finite loss aborts and keeps the last good checkpoint") {
  const auto& d = data();
  auto cfg = d.config();
  cfg.lr = 1e200;
  cfg.warmup_frac = 0.0;
  cfg.max_steps = 50;
  cfg.eval_every = 1;
  const auto dir = scratch("nan");
  CHECK_THROWS_AS(train::train(d.train_set, d.val_set, d.model(), cfg, {(dir / "m.ckpt").string(), ""}), InvariantError);
  CHECK(std::filesystem::exists(dir / "m.ckpt"));
}

TEST_CASE("train/evaluate: empty sets are rejected") {
  const auto& d = data();
  CHECK_THROWS_AS(train::train(EncodedSet{}, d.val_set, d.model(), d.config()), InvariantError);
  CHECK_THROWS_AS(train::train(d.train_set, EncodedSet{}, d.model(), d.config()), InvariantError);
  model::Model m(d.model());
  CHECK_THROWS_AS(evaluate(m, EncodedSet{}), InvariantError);
}

TEST_CASE("evaluate: report fields follow the mode contract") {
  const auto& d = data();
  auto base_cfg = configure_for_system(d.model(), System::kBaseline);
  model::Model base(base_cfg);
  const auto rb = evaluate(base, d.val_set);
  CHECK(rb.em.has_value());
  CHECK(rb.token_f1.has_value());
  CHECK_FALSE(rb.lf_exact.has_value());
  CHECK_FALSE(rb.lf_relaxed.has_value());
  model::Model multi(d.model(0.3));
  const auto rm = evaluate(multi, d.val_set);
  CHECK(rm.lf_exact.has_value());
  CHECK(rm.lf_relaxed.has_value());
  CHECK(rm.lf_relaxed->f1 + 1e-12 >= rm.lf_exact->weighted.f1 - 0.5);  // sanity: scores present and finite
  CHECK(rm.n_examples == d.val_set.size());
}

TEST_CASE("overfit: one batch of 8 reaches EM 1 and LF accuracy 1") {
  const auto& d = data();
  const auto eight = take(d.train_set, 8);
  auto mc = d.model(0.3);
  mc.hidden_dim = 32;
  mc.heads = 4;
  mc.dropout = 0.0;
  TrainConfig tc;
  tc.lr = 3e-3;
  tc.batch_size = 8;
  tc.max_steps = 300;
  tc.epochs = 300;
  tc.eval_every = 300;  // validate once, on the final weights
  tc.patience = 0;
  tc.warmup_frac = 0.05;
  tc.weight_decay = 0.0;
  const auto r = train::train(eight, eight, mc, tc);
  const auto rep = evaluate(r.model, eight);
  CHECK(*rep.em == 1.0);
  CHECK(rep.lf_exact->accuracy == 1.0);
}

TEST_CASE("evidence pairs: one positive and up to k negatives per example") {
  corpus::GeneratorConfig g;
  g.num_notes = 3;
  const auto bundle = corpus::build_corpus(g, "paragraph");
  const auto set = encode_evidence_pairs(bundle.examples, bundle.vocab, text::kSentenceSeqLen, 3, 7);
  std::size_t pos = 0;
  for (int e : set.evidence) pos += e == 1 ? 1 : 0;
  CHECK(pos == bundle.examples.size());
  CHECK(set.size() == 4 * bundle.examples.size());
  const auto again = encode_evidence_pairs(bundle.examples, bundle.vocab, text::kSentenceSeqLen, 3, 7);
  CHECK(again.evidence == set.evidence);
}

TEST_CASE("matrix: needs three seeds; mean and sd helpers") {
  CHECK(mean_of({1.0, 2.0, 3.0}) == 2.0);
  CHECK(sd_of({1.0, 2.0, 3.0}) == doctest::Approx(1.0));
  CHECK(sd_of({4.0}) == 0.0);
  MatrixConfig mc;
  mc.seeds = {1, 2};
  CHECK_THROWS_AS(run_matrix(data().bundle.examples, corpus::default_question_templates(), mc), ConfigError);
}
