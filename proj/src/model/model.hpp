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

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "common/rng.hpp"
#include "model/config.hpp"
#include "tensor/tensor.hpp"
#include "text/encoding.hpp"

namespace mtlqa::model {

// B encoded sequences trimmed to the longest used length in the batch and
// packed row-major: position t of sequence b is row b * len + t.
struct Batch {
  std::size_t size = 0;
  std::size_t len = 0;
  std::vector<int> token_ids;
  std::vector<int> segment_ids;
  std::vector<int> entity_ids;
  std::vector<bool> mask;
  std::vector<std::size_t> context_begin;
  std::vector<std::size_t> context_end;

  // Gold labels; -1 marks a missing value.
  std::vector<int> start;
  std::vector<int> end;
  std::vector<int> lf;
  std::vector<int> evidence;

  // Row of every position that carries an entity; 1.0 flagged, 0.0 not.
  std::vector<double> entity_flags() const;
};

Batch make_batch(std::span<const text::EncodedPair* const> pairs, std::span<const int> lf_labels,
                 std::span<const int> evidence_labels = {});

struct HeadOutputs {
  Tensor start_logits;    // [B x L], -inf outside the context segment
  Tensor end_logits;      // [B x L]
  Tensor lf_logits;       // [B x num_lf_classes]
  Tensor evidence_logit;  // [B x 1], evidence mode only
};

// h = GELU(w W_t + flag * (e W_e) + b). Rows with flag 0 never read e.
Tensor fuse(const Tensor& tokens, const Tensor& entities, std::span<const double> flags, const Tensor& w_t,
            const Tensor& w_e, const Tensor& bias);
// Entity-free path used by the plain baseline: h = GELU(w W_t + b).
Tensor fuse_tokens_only(const Tensor& tokens, const Tensor& w_t, const Tensor& bias);

class Model {
 public:
  explicit Model(ModelConfig config);

  const ModelConfig& config() const { return config_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }

  // A null rng disables dropout.
  Tensor encode_tokens(const Batch& batch, Rng* rng) const;    // [B*L x d_t]
  Tensor encode_entities(const Batch& batch, Rng* rng) const;  // [B*L x d_e]
  Tensor fused_states(const Batch& batch, Rng* rng) const;     // [B*L x d_t]
  HeadOutputs heads(const Tensor& fused, const Batch& batch) const;
  HeadOutputs forward(const Batch& batch, Rng* rng) const;

 private:
  Tensor block(const Tensor& x, const std::string& prefix, std::size_t batch, std::size_t heads,
               const std::vector<bool>& mask, Rng* rng) const;
  const Tensor& p(const std::string& name) const { return params_.get(name); }

  ModelConfig config_;
  ParameterSet params_;
};

// Highest start + end score over pairs with start <= end <= start + max_len - 1
// and both ends inside `allowed`. Throws InvariantError if nothing is allowed.
std::pair<int, int> decode_span(std::span<const double> start_logits, std::span<const double> end_logits,
                                const std::vector<bool>& allowed, std::size_t max_answer_len);

// omega * aux + (1 - omega) * main
double weighted_objective(double aux_loss, double main_loss, double omega);

struct LossParts {
  Tensor total;
  double main = 0.0;  // L_span or L_evidence
  double lf = 0.0;    // NaN when no gold logical form was supplied
};

// Span start/end cross-entropies averaged, blended with the LF cross-entropy.
LossParts multitask_loss(const HeadOutputs& out, std::span<const int> gold_start, std::span<const int> gold_end,
                         std::span<const int> gold_lf, double omega);

// Binary cross-entropy on the evidence logit, blended with the LF cross-entropy.
LossParts evidence_loss(const HeadOutputs& out, std::span<const int> gold_evidence, std::span<const int> gold_lf,
                        double omega);

}  // namespace mtlqa::model
