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
#include <span>
#include <vector>

#include "common/rng.hpp"
#include "tensor/tensor.hpp"

namespace mtlqa::ops {

// a[m x k] * b[k x n] -> [m x n]
Tensor matmul(const Tensor& a, const Tensor& b);

// Elementwise a + b; shapes must match exactly.
Tensor add(const Tensor& a, const Tensor& b);

// x[n x d] + bias[d] broadcast over rows.
Tensor add_bias(const Tensor& x, const Tensor& bias);

// x[n x in] * weight[in x out] + bias[out]
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

Tensor scale(const Tensor& x, double factor);

// Multiplies row i of x[n x d] by the constant factors[i]. Gradient flows only
// through rows with a non-zero factor.
Tensor scale_rows(const Tensor& x, std::span<const double> factors);

// Exact (erf) GELU.
Tensor gelu(const Tensor& x);
double gelu_value(double x);

// Per-row normalization of x[n x d] followed by gain and bias.
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-12);

// Rows of table[v x d] selected by ids -> [ids.size() x d].
Tensor embedding(const Tensor& table, std::span<const int> ids);

// Inverted dropout; identity when rate == 0.
Tensor dropout(const Tensor& x, double rate, Rng& rng);

// Softmax over the last dimension.
Tensor softmax(const Tensor& x);

// Scaled dot-product attention with per-head inputs q, k, v of shape [h x L x d].
// Keys at positions where mask[j] is false are excluded from normalization.
Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v, const std::vector<bool>& mask);

// Multi-head attention on packed activations [batch*L x model_dim]; head h of
// sequence b occupies columns [h*dh, (h+1)*dh) of rows [b*L, (b+1)*L).
Tensor multi_head_attention(const Tensor& q, const Tensor& k, const Tensor& v, std::size_t batch, std::size_t heads,
                            const std::vector<bool>& key_mask);

Tensor reshape(const Tensor& x, Shape shape);

// Rows of x[n x d] at the given indices -> [idx.size() x d].
Tensor gather_rows(const Tensor& x, std::span<const std::size_t> idx);

// Column j of x[n x c] -> [n].
Tensor column(const Tensor& x, std::size_t j);

// Positions with keep[i] == false are replaced by value and receive no gradient.
Tensor masked_fill(const Tensor& x, const std::vector<bool>& keep, double value);

// Mean over rows of -log softmax(logits)[target]; logits [batch x classes].
Tensor softmax_cross_entropy(const Tensor& logits, std::span<const int> targets);

// Mean binary cross-entropy on raw logits (any shape with numel == labels.size()).
Tensor bce_with_logits(const Tensor& logits, std::span<const int> labels);

Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);

}  // namespace mtlqa::ops
