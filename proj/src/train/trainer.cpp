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

#include "train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "corpus/logical_form.hpp"
#include "tensor/adam.hpp"
#include "tensor/checkpoint.hpp"

namespace mtlqa::train {

System parse_system(const std::string& s) {
  if (s == "baseline") return System::kBaseline;
  if (s == "fused") return System::kFused;
  if (s == "multitask") return System::kMultitask;
  if (s == "evidence") return System::kEvidence;
  throw ConfigError("unknown system '" + s + "' (expected baseline, fused, multitask or evidence)");
}

const char* system_name(System s) {
  switch (s) {
    case System::kBaseline:
      return "baseline";
    case System::kFused:
      return "fused";
    case System::kMultitask:
      return "multitask";
    case System::kEvidence:
      return "evidence";
  }
  return "?";
}

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("train.lr must be positive");
  if (weight_decay < 0.0) throw ConfigError("train.weight_decay must be non-negative");
  if (!(warmup_frac >= 0.0 && warmup_frac < 1.0)) throw ConfigError("train.warmup_frac must lie in [0, 1)");
  if (batch_size == 0) throw ConfigError("train.batch_size must be positive");
  if (epochs == 0 && max_steps == 0) throw ConfigError("train.epochs or train.max_steps must be positive");
}

nlohmann::json TrainConfig::to_json() const {
  return {{"lr", lr},
          {"weight_decay", weight_decay},
          {"warmup_frac", warmup_frac},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"seed", seed},
          {"patience", patience},
          {"max_steps", max_steps},
          {"eval_every", eval_every},
          {"system", system_name(system)}};
}

TrainConfig TrainConfig::from_settings(const Settings& s, TrainConfig c) {
  s.require_known("train.", {"lr", "weight_decay", "warmup_frac", "epochs",
                             "batch_size", "seed", "patience", "max_steps",
                             "eval_every", "system"});
  auto sz = [&](const char* key, std::size_t fallback) {
    const long long v = s.get_int(key, static_cast<long long>(fallback));
    if (v < 0) throw ConfigError(std::string(key) + " must be non-negative");
    return static_cast<std::size_t>(v);
  };
  c.lr = s.get_double("train.lr", c.lr);
  c.weight_decay = s.get_double("train.weight_decay", c.weight_decay);
  c.warmup_frac = s.get_double("train.warmup_frac", c.warmup_frac);
  c.epochs = sz("train.epochs", c.epochs);
  c.batch_size = sz("train.batch_size", c.batch_size);
  c.seed = static_cast<std::uint64_t>(sz("train.seed", static_cast<std::size_t>(c.seed)));
  c.patience = sz("train.patience", c.patience);
  c.max_steps = sz("train.max_steps", c.max_steps);
  c.eval_every = sz("train.eval_every", c.eval_every);
  c.system = parse_system(s.get_string("train.system", system_name(c.system)));
  c.validate();
  return c;
}

double lr_at(std::size_t step, std::size_t total_steps, const TrainConfig& config) {
  if (total_steps == 0) throw ConfigError("lr schedule needs at least one step");
  if (step > total_steps) throw IndexError("step " + std::to_string(step) + " beyond " + std::to_string(total_steps));
  const double t = static_cast<double>(step);
  const double total = static_cast<double>(total_steps);
  const double warm = config.warmup_frac * total;
  if (t < warm) return config.lr * t / warm;
  if (total <= warm) return config.lr;
  return config.lr * (total - t) / (total - warm);
}

model::ModelConfig configure_for_system(model::ModelConfig c, System system) {
  switch (system) {
    case System::kBaseline:
      c.use_entities = false;
      c.omega = 0.0;
      c.mode = model::Mode::kSpan;
      break;
    case System::kFused:
      c.use_entities = true;
      c.omega = 0.0;
      c.mode = model::Mode::kSpan;
      break;
    case System::kMultitask:
      if (!(c.omega > 0.0)) throw ConfigError("the multitask system requires omega > 0");
      c.use_entities = true;
      c.mode = model::Mode::kSpan;
      break;
    case System::kEvidence:
      c.use_entities = true;
      c.mode = model::Mode::kEvidence;
      break;
  }
  return c;
}

EncodedSet encode_examples(const std::vector<corpus::QAExample>& examples, const text::Vocab& vocab,
                           std::size_t max_seq_len, bool skip_dropped) {
  EncodedSet set;
  for (const auto& ex : examples) {
    const std::string ctx = ex.context_text();
    auto pair = text::encode_pair(ex.question, ex.question_entities, ctx, ex.context_entities,
                                  text::CharSpan{ex.answer.char_start, ex.answer.char_end}, vocab, max_seq_len);
    if (pair.dropped) {
      ++set.dropped;
      if (skip_dropped) continue;
    }
    set.pairs.push_back(std::move(pair));
    set.lf.push_back(ex.lf_id);
    set.contexts.push_back(ctx);
    set.answers.push_back(ex.answer.text);
  }
  return set;
}

namespace {

std::vector<text::EntityTag> tags_in_sentence(const corpus::QAExample& ex, std::size_t i) {
  const std::size_t begin = ex.sentence_offset(i);
  const std::size_t end = begin + ex.context[i].size();
  std::vector<text::EntityTag> out;
  for (const auto& t : ex.context_entities) {
    if (t.char_start >= begin && t.char_end <= end) {
      out.push_back({t.type, t.char_start - begin, t.char_end - begin});
    }
  }
  return out;
}

}  // namespace

EncodedSet encode_evidence_pairs(const std::vector<corpus::QAExample>& examples, const text::Vocab& vocab,
                                 std::size_t max_seq_len, std::size_t negatives, std::uint64_t seed) {
  EncodedSet set;
  for (std::size_t n = 0; n < examples.size(); ++n) {
    const auto& ex = examples[n];
    Rng rng(derive_seed(seed, n));
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < ex.context.size(); ++i) {
      if (i != ex.evidence_index) others.push_back(i);
    }
    rng.shuffle(others);
    others.resize(std::min(others.size(), negatives));
    std::vector<std::size_t> chosen{ex.evidence_index};
    chosen.insert(chosen.end(), others.begin(), others.end());
    for (std::size_t i : chosen) {
      set.pairs.push_back(text::encode_pair(ex.question, ex.question_entities, ex.context[i], tags_in_sentence(ex, i),
                                            std::nullopt, vocab, max_seq_len));
      set.lf.push_back(ex.lf_id);
      set.evidence.push_back(i == ex.evidence_index ? 1 : 0);
      set.contexts.push_back(ex.context[i]);
      set.answers.emplace_back();
    }
  }
  return set;
}

nlohmann::json log_record_to_json(const LogRecord& r, model::Mode mode) {
  nlohmann::json j{{"step", r.step}, {"lr", r.lr}};
  j[mode == model::Mode::kSpan ? "L_span" : "L_evidence"] = r.main_loss;
  j["L_lf"] = std::isnan(r.lf_loss) ? nlohmann::json(nullptr) : nlohmann::json(r.lf_loss);
  j["L_total"] = r.total;
  return j;
}

double selection_metric(const metrics::EvalReport& report, model::Mode mode) {
  if (mode == model::Mode::kEvidence) return report.evidence ? report.evidence->weighted.f1 : 0.0;
  return report.token_f1.value_or(0.0);
}

namespace {

model::Batch batch_of(const EncodedSet& set, std::span<const std::size_t> idx) {
  std::vector<const text::EncodedPair*> ptrs;
  std::vector<int> lf, ev;
  for (std::size_t i : idx) {
    ptrs.push_back(&set.pairs[i]);
    lf.push_back(set.lf[i]);
    if (!set.evidence.empty()) ev.push_back(set.evidence[i]);
  }
  return model::make_batch(ptrs, lf, ev);
}

void copy_values(const ParameterSet& from, ParameterSet& to) {
  for (std::size_t i = 0; i < from.size(); ++i) {
    auto src = from.entries()[i].tensor.data();
    auto dst = to.entries()[i].tensor.data();
    std::copy(src.begin(), src.end(), dst.begin());
  }
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

TrainResult train(const EncodedSet& train_set, const EncodedSet& val_set, const model::ModelConfig& model_config,
                  const TrainConfig& config, const TrainOutputs& outputs) {
  config.validate();
  if (train_set.size() == 0) throw InvariantError("training set is empty");
  if (val_set.size() == 0) throw InvariantError("validation set is empty");
  const bool evidence_mode = model_config.mode == model::Mode::kEvidence;
  if (evidence_mode && train_set.evidence.size() != train_set.size()) {
    throw InvariantError("evidence mode needs evidence labels on every training pair");
  }

  model::Model model(model_config);
  model::Model best(model_config);
  copy_values(model.params(), best.params());
  AdamState adam(model.params(), AdamHyper{config.lr, 0.9, 0.999, 1e-8, config.weight_decay});

  const std::size_t n = train_set.size();
  const std::size_t per_epoch = (n + config.batch_size - 1) / config.batch_size;
  const std::size_t total = config.max_steps ? config.max_steps : config.epochs * per_epoch;
  const std::size_t eval_every = config.eval_every ? config.eval_every : per_epoch;

  Rng dropout_rng(derive_seed(config.seed, 0xd5));
  std::ofstream log_out;
  if (!outputs.log_path.empty()) {
    log_out.open(outputs.log_path);
    if (!log_out) throw IoError("cannot write training log " + outputs.log_path);
  }

  TrainResult result{std::move(best), {}, {}, -1.0, 0, 0};
  const std::uint64_t digest = model_config.digest();
  auto save_best = [&] {
    if (!outputs.checkpoint_path.empty()) save_checkpoint(outputs.checkpoint_path, result.model.params(), digest);
  };
  save_best();

  std::vector<std::size_t> order(n);
  std::size_t since_best = 0;
  std::size_t step = 0;
  for (std::size_t epoch = 0; step < total; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(config.seed, 0xe90c0000ULL + epoch));
    shuffle_rng.shuffle(order);

    for (std::size_t off = 0; off < n && step < total; off += config.batch_size) {
      const std::size_t end = std::min(n, off + config.batch_size);
      const auto batch = batch_of(train_set, std::span(order).subspan(off, end - off));
      const auto out = model.forward(batch, &dropout_rng);
      auto parts = evidence_mode
                             ? model::evidence_loss(out, batch.evidence, batch.lf, model_config.omega)
                             : model::multitask_loss(out, batch.start, batch.end, batch.lf, model_config.omega);
      const double loss = parts.total.item();
      ++step;
      LogRecord rec{step, lr_at(step, total, config), parts.main, parts.lf, loss};
      result.log.push_back(rec);
      if (log_out) log_out << log_record_to_json(rec, model_config.mode).dump() << '\n';
      if (!finite(loss)) {
        save_best();
        throw InvariantError("non-finite training loss at step " + std::to_string(step) +
                             "; best checkpoint retained");
      }

      model.params().zero_grad();
      parts.total.backward();
      adam.hyper.lr = rec.lr;
      adam_step(model.params(), adam);

      if (step % eval_every == 0 || step == total) {
        const double metric = selection_metric(evaluate(model, val_set), model_config.mode);
        result.validation_history.push_back(metric);
        if (metric > result.best_validation) {
          result.best_validation = metric;
          result.best_step = step;
          copy_values(model.params(), result.model.params());
          save_best();
          since_best = 0;
        } else if (++since_best >= config.patience && config.patience > 0) {
          result.steps = step;
          return result;
        }
      }
    }
  }
  result.steps = step;
  return result;
}

metrics::EvalReport evaluate(const model::Model& model, const EncodedSet& set, std::size_t batch_size) {
  if (set.size() == 0) throw InvariantError("cannot evaluate an empty split");
  const auto& cfg = model.config();
  const bool evidence_mode = cfg.mode == model::Mode::kEvidence;
  if (evidence_mode && set.evidence.size() != set.size()) {
    throw InvariantError("evidence evaluation needs evidence labels");
  }

  std::vector<int> lf_pred, ev_pred;
  double em = 0.0, f1 = 0.0;
  std::map<int, std::pair<double, double>> per_lf_sum;
  std::map<int, std::size_t> per_lf_count;

  std::vector<std::size_t> idx;
  for (std::size_t off = 0; off < set.size(); off += batch_size) {
    const std::size_t end = std::min(set.size(), off + batch_size);
    idx.resize(end - off);
    std::iota(idx.begin(), idx.end(), off);
    const auto batch = batch_of(set, idx);
    const auto out = model.forward(batch, nullptr);
    const std::size_t c = cfg.num_lf_classes;
    for (std::size_t b = 0; b < batch.size; ++b) {
      const auto row = out.lf_logits.data().subspan(b * c, c);
      lf_pred.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
      if (evidence_mode) {
        ev_pred.push_back(out.evidence_logit.at(b) > 0.0 ? 1 : 0);
        continue;
      }
      std::vector<bool> allowed(batch.len, false);
      for (std::size_t t = batch.context_begin[b]; t < batch.context_end[b] && t < batch.len; ++t) allowed[t] = true;
      const auto [s, e] = model::decode_span(out.start_logits.data().subspan(b * batch.len, batch.len),
                                             out.end_logits.data().subspan(b * batch.len, batch.len), allowed,
                                             cfg.max_answer_len);
      const auto& pair = set.pairs[off + b];
      const auto chars = text::token_span_to_chars(pair, s, e);
      const std::string pred = set.contexts[off + b].substr(chars.start, chars.end - chars.start);
      const double ex_em = metrics::span_em(pred, set.answers[off + b]);
      const double ex_f1 = metrics::token_f1(pred, set.answers[off + b]);
      em += ex_em;
      f1 += ex_f1;
      auto& acc = per_lf_sum[set.lf[off + b]];
      acc.first += ex_em;
      acc.second += ex_f1;
      ++per_lf_count[set.lf[off + b]];
    }
  }

  metrics::EvalReport report;
  report.n_examples = set.size();
  const double n = static_cast<double>(set.size());
  if (evidence_mode) {
    report.evidence = metrics::evidence_scores(ev_pred, set.evidence);
  } else {
    report.em = em / n;
    report.token_f1 = f1 / n;
    for (const auto& [lf, acc] : per_lf_sum) {
      const double k = static_cast<double>(per_lf_count[lf]);
      report.per_lf_em_f1[lf] = {acc.first / k, acc.second / k};
    }
  }
  if (cfg.omega > 0.0) {
    report.lf_exact = metrics::lf_exact_scores(lf_pred, set.lf, static_cast<int>(cfg.num_lf_classes));
    report.lf_relaxed = metrics::lf_relaxed_scores(lf_pred, set.lf, corpus::lf_inventory());
  }
  return report;
}

}  // namespace mtlqa::train
