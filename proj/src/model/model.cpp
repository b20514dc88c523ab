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

#include "model/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.hpp"
#include "tensor/ops.hpp"

namespace mtlqa::model {

namespace {

constexpr double kInitStd = 0.02;

Tensor normal_init(Shape shape, Rng& rng) {
  std::vector<double> v(shape_numel(shape));
  for (auto& x : v) x = rng.truncated_normal(kInitStd);
  return Tensor::from(std::move(shape), std::move(v));
}

void add_block_params(ParameterSet& ps, const std::string& pre, std::size_t d, std::size_t ffn, Rng& rng) {
  ps.add(pre + ".ln1.g", Tensor::full({d}, 1.0));
  ps.add(pre + ".ln1.b", Tensor::zeros({d}));
  for (const char* m : {"q", "k", "v", "o"}) {
    ps.add(pre + ".attn.w" + m, normal_init({d, d}, rng));
    ps.add(pre + ".attn.b" + m, Tensor::zeros({d}));
  }
  ps.add(pre + ".ln2.g", Tensor::full({d}, 1.0));
  ps.add(pre + ".ln2.b", Tensor::zeros({d}));
  ps.add(pre + ".ffn.w1", normal_init({d, ffn}, rng));
  ps.add(pre + ".ffn.b1", Tensor::zeros({ffn}));
  ps.add(pre + ".ffn.w2", normal_init({ffn, d}, rng));
  ps.add(pre + ".ffn.b2", Tensor::zeros({d}));
}

Tensor maybe_dropout(const Tensor& x, double rate, Rng* rng) {
  return (rng && rate > 0.0) ? ops::dropout(x, rate, *rng) : x;
}

}  // namespace

std::vector<double> Batch::entity_flags() const {
  std::vector<double> f(entity_ids.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = (mask[i] && entity_ids[i] != 0) ? 1.0 : 0.0;
  return f;
}

Batch make_batch(std::span<const text::EncodedPair* const> pairs, std::span<const int> lf_labels,
                 std::span<const int> evidence_labels) {
  if (pairs.empty()) throw InvariantError("cannot build an empty batch");
  if (!lf_labels.empty() && lf_labels.size() != pairs.size()) {
    throw DimensionError("batch: " + std::to_string(lf_labels.size()) + " LF labels for " +
                         std::to_string(pairs.size()) + " sequences");
  }
  if (!evidence_labels.empty() && evidence_labels.size() != pairs.size()) {
    throw DimensionError("batch: evidence label count differs from sequence count");
  }
  Batch b;
  b.size = pairs.size();
  for (const auto* p : pairs) b.len = std::max(b.len, p->used_length());
  const std::size_t rows = b.size * b.len;
  b.token_ids.reserve(rows);
  b.segment_ids.reserve(rows);
  b.entity_ids.reserve(rows);
  b.mask.reserve(rows);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = *pairs[i];
    if (p.length() < b.len) throw DimensionError("batch: sequence shorter than its used length");
    b.token_ids.insert(b.token_ids.end(), p.token_ids.begin(), p.token_ids.begin() + static_cast<long>(b.len));
    b.segment_ids.insert(b.segment_ids.end(), p.segment_ids.begin(), p.segment_ids.begin() + static_cast<long>(b.len));
    b.entity_ids.insert(b.entity_ids.end(), p.entity_ids.begin(), p.entity_ids.begin() + static_cast<long>(b.len));
    b.mask.insert(b.mask.end(), p.attention_mask.begin(), p.attention_mask.begin() + static_cast<long>(b.len));
    b.context_begin.push_back(p.context_begin);
    b.context_end.push_back(p.context_end);
    b.start.push_back(p.answer_start_tok);
    b.end.push_back(p.answer_end_tok);
    b.lf.push_back(lf_labels.empty() ? -1 : lf_labels[i]);
    b.evidence.push_back(evidence_labels.empty() ? -1 : evidence_labels[i]);
  }
  return b;
}

Tensor fuse(const Tensor& tokens, const Tensor& entities, std::span<const double> flags, const Tensor& w_t,
            const Tensor& w_e, const Tensor& bias) {
  if (tokens.ndim() != 2 || entities.ndim() != 2 || tokens.dim(0) != entities.dim(0)) {
    throw DimensionError("fuse: token states " + shape_str(tokens.shape()) + " and entity states " +
                         shape_str(entities.shape()) + " do not align");
  }
  if (flags.size() != tokens.dim(0)) throw DimensionError("fuse: one flag per position required");
  const Tensor entity_part = ops::scale_rows(ops::matmul(entities, w_e), flags);
  return ops::gelu(ops::add_bias(ops::add(ops::matmul(tokens, w_t), entity_part), bias));
}

Tensor fuse_tokens_only(const Tensor& tokens, const Tensor& w_t, const Tensor& bias) {
  return ops::gelu(ops::linear(tokens, w_t, bias));
}

Model::Model(ModelConfig config) : config_(std::move(config)) {
  config_.validate();
  Rng rng(derive_seed(config_.init_seed, 0x1417));
  const std::size_t d = config_.hidden_dim;

  params_.add("tok.emb", normal_init({config_.vocab_size, d}, rng));
  params_.add("tok.seg", normal_init({2, d}, rng));
  params_.add("tok.pos", normal_init({config_.max_positions, d}, rng));
  params_.add("tok.ln.g", Tensor::full({d}, 1.0));
  params_.add("tok.ln.b", Tensor::zeros({d}));
  for (std::size_t l = 0; l < config_.layers; ++l) {
    add_block_params(params_, "enc" + std::to_string(l), d, config_.resolved_ffn_dim(), rng);
  }
  params_.add("enc.lnf.g", Tensor::full({d}, 1.0));
  params_.add("enc.lnf.b", Tensor::zeros({d}));

  if (config_.use_entities) {
    const std::size_t de = config_.entity_dim;
    params_.add("ent.emb", normal_init({config_.entity_vocab_size, de}, rng));
    for (std::size_t l = 0; l < config_.entity_layers; ++l) {
      add_block_params(params_, "ent" + std::to_string(l), de, 2 * de, rng);
    }
    params_.add("ent.lnf.g", Tensor::full({de}, 1.0));
    params_.add("ent.lnf.b", Tensor::zeros({de}));
    params_.add("fuse.w_e", normal_init({de, d}, rng));
  }
  params_.add("fuse.w_t", normal_init({d, d}, rng));
  params_.add("fuse.b", Tensor::zeros({d}));

  if (config_.mode == Mode::kSpan) {
    params_.add("span.w", normal_init({d, 2}, rng));
    params_.add("span.b", Tensor::zeros({2}));
  } else {
    params_.add("evidence.w", normal_init({d, 1}, rng));
    params_.add("evidence.b", Tensor::zeros({1}));
  }
  params_.add("lf.w", normal_init({d, config_.num_lf_classes}, rng));
  params_.add("lf.b", Tensor::zeros({config_.num_lf_classes}));
}

Tensor Model::block(const Tensor& x, const std::string& pre, std::size_t batch, std::size_t heads,
                    const std::vector<bool>& mask, Rng* rng) const {
  const Tensor h = ops::layer_norm(x, p(pre + ".ln1.g"), p(pre + ".ln1.b"));
  const Tensor q = ops::linear(h, p(pre + ".attn.wq"), p(pre + ".attn.bq"));
  const Tensor k = ops::linear(h, p(pre + ".attn.wk"), p(pre + ".attn.bk"));
  const Tensor v = ops::linear(h, p(pre + ".attn.wv"), p(pre + ".attn.bv"));
  const Tensor a = ops::multi_head_attention(q, k, v, batch, heads, mask);
  const Tensor attn_out = ops::linear(a, p(pre + ".attn.wo"), p(pre + ".attn.bo"));
  const Tensor x1 = ops::add(x, maybe_dropout(attn_out, config_.dropout, rng));

  const Tensor h2 = ops::layer_norm(x1, p(pre + ".ln2.g"), p(pre + ".ln2.b"));
  const Tensor f = ops::linear(ops::gelu(ops::linear(h2, p(pre + ".ffn.w1"), p(pre + ".ffn.b1"))),
                               p(pre + ".ffn.w2"), p(pre + ".ffn.b2"));
  return ops::add(x1, maybe_dropout(f, config_.dropout, rng));
}

Tensor Model::encode_tokens(const Batch& batch, Rng* rng) const {
  if (batch.len > config_.max_positions) {
    throw DimensionError("sequence length " + std::to_string(batch.len) + " exceeds the " +
                         std::to_string(config_.max_positions) + " learned positions");
  }
  for (int id : batch.token_ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= config_.vocab_size) {
      throw IndexError("token id " + std::to_string(id) + " outside vocabulary of " +
                       std::to_string(config_.vocab_size));
    }
  }
  std::vector<int> positions(batch.size * batch.len);
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = static_cast<int>(i % batch.len);

  Tensor x = ops::add(ops::add(ops::embedding(p("tok.emb"), batch.token_ids), ops::embedding(p("tok.seg"), batch.segment_ids)),
                      ops::embedding(p("tok.pos"), positions));
  x = maybe_dropout(ops::layer_norm(x, p("tok.ln.g"), p("tok.ln.b")), config_.dropout, rng);
  for (std::size_t l = 0; l < config_.layers; ++l) {
    x = block(x, "enc" + std::to_string(l), batch.size, config_.heads, batch.mask, rng);
  }
  return ops::layer_norm(x, p("enc.lnf.g"), p("enc.lnf.b"));
}

Tensor Model::encode_entities(const Batch& batch, Rng* rng) const {
  if (!config_.use_entities) throw InvariantError("entity encoder is disabled in this configuration");
  for (int id : batch.entity_ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= config_.entity_vocab_size) {
      throw IndexError("entity id " + std::to_string(id) + " outside [0, " +
                       std::to_string(config_.entity_vocab_size) + ")");
    }
  }
  Tensor e = ops::embedding(p("ent.emb"), batch.entity_ids);
  for (std::size_t l = 0; l < config_.entity_layers; ++l) {
    e = block(e, "ent" + std::to_string(l), batch.size, config_.entity_heads, batch.mask, rng);
  }
  return ops::layer_norm(e, p("ent.lnf.g"), p("ent.lnf.b"));
}

Tensor Model::fused_states(const Batch& batch, Rng* rng) const {
  const Tensor w = encode_tokens(batch, rng);
  if (!config_.use_entities) return fuse_tokens_only(w, p("fuse.w_t"), p("fuse.b"));
  const Tensor e = encode_entities(batch, rng);
  return fuse(w, e, batch.entity_flags(), p("fuse.w_t"), p("fuse.w_e"), p("fuse.b"));
}

HeadOutputs Model::heads(const Tensor& fused, const Batch& batch) const {
  HeadOutputs out;
  std::vector<std::size_t> first(batch.size);
  for (std::size_t b = 0; b < batch.size; ++b) first[b] = b * batch.len;
  const Tensor pooled = ops::gather_rows(fused, first);
  out.lf_logits = ops::linear(pooled, p("lf.w"), p("lf.b"));

  if (config_.mode == Mode::kSpan) {
    const Tensor logits = ops::linear(fused, p("span.w"), p("span.b"));
    std::vector<bool> keep(batch.size * batch.len, false);
    for (std::size_t b = 0; b < batch.size; ++b) {
      for (std::size_t t = batch.context_begin[b]; t < batch.context_end[b] && t < batch.len; ++t) {
        keep[b * batch.len + t] = batch.mask[b * batch.len + t];
      }
    }
    const double neg_inf = -std::numeric_limits<double>::infinity();
    out.start_logits = ops::masked_fill(ops::reshape(ops::column(logits, 0), {batch.size, batch.len}), keep, neg_inf);
    out.end_logits = ops::masked_fill(ops::reshape(ops::column(logits, 1), {batch.size, batch.len}), keep, neg_inf);
  } else {
    out.evidence_logit = ops::linear(pooled, p("evidence.w"), p("evidence.b"));
  }
  return out;
}

HeadOutputs Model::forward(const Batch& batch, Rng* rng) const { return heads(fused_states(batch, rng), batch); }

std::pair<int, int> decode_span(std::span<const double> start_logits, std::span<const double> end_logits,
                                const std::vector<bool>& allowed, std::size_t max_answer_len) {
  const std::size_t n = start_logits.size();
  if (end_logits.size() != n || allowed.size() != n) throw DimensionError("decode_span: logit/mask length mismatch");
  if (max_answer_len == 0) throw ConfigError("decode_span: max_answer_len must be positive");
  double best = -std::numeric_limits<double>::infinity();
  std::pair<int, int> arg{-1, -1};
  for (std::size_t s = 0; s < n; ++s) {
    if (!allowed[s]) continue;
    const std::size_t last = std::min(n, s + max_answer_len);
    for (std::size_t e = s; e < last; ++e) {
      if (!allowed[e]) continue;
      const double score = start_logits[s] + end_logits[e];
      if (arg.first < 0 || score > best) {
        best = score;
        arg = {static_cast<int>(s), static_cast<int>(e)};
      }
    }
  }
  if (arg.first < 0) throw InvariantError("decode_span: no unmasked context position to decode");
  return arg;
}

double weighted_objective(double aux_loss, double main_loss, double omega) {
  return omega * aux_loss + (1.0 - omega) * main_loss;
}

namespace {

void check_omega(double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw ConfigError("omega must lie in [0, 1]");
}

// Returns the blended tensor; lf term dropped when no gold LF is available and omega == 0.
LossParts blend(const Tensor& main, const Tensor& logits, std::span<const int> gold_lf, double omega) {
  check_omega(omega);
  LossParts parts;
  parts.main = main.item();
  const bool have_lf =
      !gold_lf.empty() && std::all_of(gold_lf.begin(), gold_lf.end(), [](int v) { return v >= 0; });
  if (!have_lf) {
    if (omega > 0.0) throw InvariantError("a gold logical form is required when omega > 0");
    parts.lf = std::numeric_limits<double>::quiet_NaN();
    parts.total = main;
    return parts;
  }
  const Tensor lf = ops::softmax_cross_entropy(logits, gold_lf);
  parts.lf = lf.item();
  parts.total = ops::add(ops::scale(lf, omega), ops::scale(main, 1.0 - omega));
  return parts;
}

}  // namespace

LossParts multitask_loss(const HeadOutputs& out, std::span<const int> gold_start, std::span<const int> gold_end,
                         std::span<const int> gold_lf, double omega) {
  if (!out.start_logits.defined()) throw InvariantError("multitask_loss needs span logits");
  const Tensor span = ops::scale(ops::add(ops::softmax_cross_entropy(out.start_logits, gold_start),
                                          ops::softmax_cross_entropy(out.end_logits, gold_end)),
                                 0.5);
  return blend(span, out.lf_logits, gold_lf, omega);
}

LossParts evidence_loss(const HeadOutputs& out, std::span<const int> gold_evidence, std::span<const int> gold_lf,
                        double omega) {
  if (!out.evidence_logit.defined()) throw InvariantError("evidence_loss needs an evidence logit");
  return blend(ops::bce_with_logits(out.evidence_logit, gold_evidence), out.lf_logits, gold_lf, omega);
}

}  // namespace mtlqa::model
