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

#include "tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "common/error.hpp"

namespace mtlqa::ops {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;
using StridedMap = Eigen::Map<RowMat, 0, Eigen::OuterStride<>>;
using ConstStridedMap = Eigen::Map<const RowMat, 0, Eigen::OuterStride<>>;

void require_2d(const Tensor& t, const char* op) {
  if (t.ndim() != 2) throw DimensionError(std::string(op) + ": expected a 2-d tensor, got " + shape_str(t.shape()));
}

detail::TensorImpl& parent(detail::TensorImpl& self, std::size_t i) { return *self.parents[i]; }

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_2d(a, "matmul");
  require_2d(b, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions differ for " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
  }
  std::vector<double> out(m * n);
  MatMap(out.data(), m, n).noalias() = ConstMatMap(a.data().data(), m, k) * ConstMatMap(b.data().data(), k, n);
  return Tensor::make_result({m, n}, std::move(out), {a, b}, [m, k, n](detail::TensorImpl& self) {
    ConstMatMap g(self.grad.data(), m, n);
    auto& pa = parent(self, 0);
    auto& pb = parent(self, 1);
    if (pa.requires_grad) {
      MatMap(pa.grad.data(), m, k).noalias() += g * ConstMatMap(pb.data.data(), k, n).transpose();
    }
    if (pb.requires_grad) {
      MatMap(pb.grad.data(), k, n).noalias() += ConstMatMap(pa.data.data(), m, k).transpose() * g;
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError("add: shape mismatch " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](detail::TensorImpl& self) {
    for (std::size_t p = 0; p < 2; ++p) {
      auto& par = parent(self, p);
      if (!par.requires_grad) continue;
      for (std::size_t i = 0; i < self.grad.size(); ++i) par.grad[i] += self.grad[i];
    }
  });
}

Tensor add_bias(const Tensor& x, const Tensor& bias) {
  require_2d(x, "add_bias");
  const std::size_t n = x.dim(0), d = x.dim(1);
  if (bias.numel() != d) {
    throw DimensionError("add_bias: bias " + shape_str(bias.shape()) + " does not match rows of " +
                         shape_str(x.shape()));
  }
  std::vector<double> out(x.data().begin(), x.data().end());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) out[r * d + c] += bias.data()[c];
  }
  return Tensor::make_result(x.shape(), std::move(out), {x, bias}, [n, d](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    auto& pb = parent(self, 1);
    if (px.requires_grad) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) px.grad[i] += self.grad[i];
    }
    if (pb.requires_grad) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) pb.grad[c] += self.grad[r * d + c];
      }
    }
  });
}

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) { return add_bias(matmul(x, weight), bias); }

Tensor scale(const Tensor& x, double factor) {
  std::vector<double> out(x.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.data()[i] * factor;
  return Tensor::make_result(x.shape(), std::move(out), {x}, [factor](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) px.grad[i] += self.grad[i] * factor;
  });
}

Tensor scale_rows(const Tensor& x, std::span<const double> factors) {
  require_2d(x, "scale_rows");
  const std::size_t n = x.dim(0), d = x.dim(1);
  if (factors.size() != n) {
    throw DimensionError("scale_rows: " + std::to_string(factors.size()) + " factors for " + shape_str(x.shape()));
  }
  std::vector<double> f(factors.begin(), factors.end());
  std::vector<double> out(x.numel());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) out[r * d + c] = f[r] == 0.0 ? 0.0 : x.data()[r * d + c] * f[r];
  }
  return Tensor::make_result(x.shape(), std::move(out), {x}, [f = std::move(f), d](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    for (std::size_t r = 0; r < f.size(); ++r) {
      if (f[r] == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) px.grad[r * d + c] += self.grad[r * d + c] * f[r];
    }
  });
}

double gelu_value(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

Tensor gelu(const Tensor& x) {
  std::vector<double> out(x.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = gelu_value(x.data()[i]);
  return Tensor::make_result(x.shape(), std::move(out), {x}, [](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    constexpr double kInvSqrt2Pi = 0.3989422804014327;
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const double v = px.data[i];
      const double cdf = 0.5 * (1.0 + std::erf(v * M_SQRT1_2));
      const double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
      px.grad[i] += self.grad[i] * (cdf + v * pdf);
    }
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
  require_2d(x, "layer_norm");
  const std::size_t n = x.dim(0), d = x.dim(1);
  if (gain.numel() != d || bias.numel() != d) {
    throw DimensionError("layer_norm: gain/bias size does not match " + shape_str(x.shape()));
  }
  std::vector<double> xhat(n * d), rstd(n), out(n * d);
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = x.data().data() + r * d;
    double mu = 0.0;
    for (std::size_t c = 0; c < d; ++c) mu += row[c];
    mu /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t c = 0; c < d; ++c) var += (row[c] - mu) * (row[c] - mu);
    var /= static_cast<double>(d);
    rstd[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < d; ++c) {
      xhat[r * d + c] = (row[c] - mu) * rstd[r];
      out[r * d + c] = xhat[r * d + c] * gain.data()[c] + bias.data()[c];
    }
  }
  return Tensor::make_result(
      x.shape(), std::move(out), {x, gain, bias},
      [xhat = std::move(xhat), rstd = std::move(rstd), n, d](detail::TensorImpl& self) {
        auto& px = parent(self, 0);
        auto& pg = parent(self, 1);
        auto& pb = parent(self, 2);
        std::vector<double> dxhat(d);
        for (std::size_t r = 0; r < n; ++r) {
          const double* g = self.grad.data() + r * d;
          const double* xh = xhat.data() + r * d;
          if (pg.requires_grad) {
            for (std::size_t c = 0; c < d; ++c) pg.grad[c] += g[c] * xh[c];
          }
          if (pb.requires_grad) {
            for (std::size_t c = 0; c < d; ++c) pb.grad[c] += g[c];
          }
          if (!px.requires_grad) continue;
          double sum_dx = 0.0, sum_dx_xh = 0.0;
          for (std::size_t c = 0; c < d; ++c) {
            dxhat[c] = g[c] * pg.data[c];
            sum_dx += dxhat[c];
            sum_dx_xh += dxhat[c] * xh[c];
          }
          const double inv_d = 1.0 / static_cast<double>(d);
          for (std::size_t c = 0; c < d; ++c) {
            px.grad[r * d + c] += rstd[r] * (dxhat[c] - inv_d * sum_dx - xh[c] * inv_d * sum_dx_xh);
          }
        }
      });
}

Tensor embedding(const Tensor& table, std::span<const int> ids) {
  require_2d(table, "embedding");
  const std::size_t v = table.dim(0), d = table.dim(1);
  std::vector<int> idx(ids.begin(), ids.end());
  std::vector<double> out(idx.size() * d);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || static_cast<std::size_t>(idx[i]) >= v) {
      throw IndexError("embedding: id " + std::to_string(idx[i]) + " outside table of " + std::to_string(v) + " rows");
    }
    std::copy_n(table.data().data() + static_cast<std::size_t>(idx[i]) * d, d, out.data() + i * d);
  }
  const std::size_t n = idx.size();
  return Tensor::make_result({n, d}, std::move(out), {table}, [idx = std::move(idx), d](detail::TensorImpl& self) {
    auto& pt = parent(self, 0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      double* dst = pt.grad.data() + static_cast<std::size_t>(idx[i]) * d;
      const double* src = self.grad.data() + i * d;
      for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
    }
  });
}

Tensor dropout(const Tensor& x, double rate, Rng& rng) {
  if (rate <= 0.0) return x;
  if (rate >= 1.0) throw InvariantError("dropout rate must be below 1");
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(x.numel());
  std::vector<double> out(x.numel());
  for (std::size_t i = 0; i < out.size(); ++i) {
    mask[i] = rng.uniform() < rate ? 0.0 : keep_scale;
    out[i] = x.data()[i] * mask[i];
  }
  return Tensor::make_result(x.shape(), std::move(out), {x}, [mask = std::move(mask)](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    for (std::size_t i = 0; i < mask.size(); ++i) px.grad[i] += self.grad[i] * mask[i];
  });
}

Tensor softmax(const Tensor& x) {
  if (x.ndim() == 0 || x.numel() == 0) throw DimensionError("softmax: empty tensor");
  const std::size_t c = x.shape().back();
  const std::size_t n = x.numel() / c;
  std::vector<double> out(x.numel());
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = x.data().data() + r * c;
    const double m = *std::max_element(row, row + c);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += (out[r * c + j] = std::exp(row[j] - m));
    for (std::size_t j = 0; j < c; ++j) out[r * c + j] /= z;
  }
  std::vector<double> probs = out;
  return Tensor::make_result(x.shape(), std::move(out), {x}, [probs = std::move(probs), n, c](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    for (std::size_t r = 0; r < n; ++r) {
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += self.grad[r * c + j] * probs[r * c + j];
      for (std::size_t j = 0; j < c; ++j) px.grad[r * c + j] += probs[r * c + j] * (self.grad[r * c + j] - dot);
    }
  });
}

namespace {

// One attention problem: rows [offset, offset + L*stride) with `stride` between
// consecutive positions; q, k, v and the output share the layout.
struct AttentionGroup {
  std::size_t offset;
  std::size_t mask_offset;
};

Tensor attention_kernel(const Tensor& q, const Tensor& k, const Tensor& v, std::vector<AttentionGroup> groups,
                        std::size_t len, std::size_t head_dim, std::size_t stride, std::vector<bool> mask) {
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> out(q.numel(), 0.0);
  std::vector<double> probs(groups.size() * len * len, 0.0);
  RowMat scores(len, len);

  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& grp = groups[g];
    ConstStridedMap qm(q.data().data() + grp.offset, len, head_dim, Eigen::OuterStride<>(stride));
    ConstStridedMap km(k.data().data() + grp.offset, len, head_dim, Eigen::OuterStride<>(stride));
    ConstStridedMap vm(v.data().data() + grp.offset, len, head_dim, Eigen::OuterStride<>(stride));
    StridedMap om(out.data() + grp.offset, len, head_dim, Eigen::OuterStride<>(stride));
    MatMap pm(probs.data() + g * len * len, len, len);

    scores.noalias() = qm * km.transpose();
    scores *= inv_sqrt;
    bool any_key = false;
    for (std::size_t j = 0; j < len; ++j) {
      if (!mask[grp.mask_offset + j]) {
        scores.col(static_cast<Eigen::Index>(j)).setConstant(neg_inf);
      } else {
        any_key = true;
      }
    }
    if (!any_key) continue;  // output rows stay zero
    for (std::size_t i = 0; i < len; ++i) {
      const double m = scores.row(static_cast<Eigen::Index>(i)).maxCoeff();
      double z = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        const double e = std::exp(scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - m);
        pm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e;
        z += e;
      }
      pm.row(static_cast<Eigen::Index>(i)) /= z;
    }
    om.noalias() = pm * vm;
  }

  Shape shape = q.shape();
  return Tensor::make_result(
      std::move(shape), std::move(out), {q, k, v},
      [groups = std::move(groups), probs = std::move(probs), len, head_dim, stride,
       inv_sqrt](detail::TensorImpl& self) {
        auto& pq = parent(self, 0);
        auto& pk = parent(self, 1);
        auto& pv = parent(self, 2);
        RowMat dp(len, len), ds(len, len);
        for (std::size_t g = 0; g < groups.size(); ++g) {
          const std::size_t off = groups[g].offset;
          ConstMatMap pm(probs.data() + g * len * len, len, len);
          ConstStridedMap dout(self.grad.data() + off, len, head_dim, Eigen::OuterStride<>(stride));
          ConstStridedMap qm(pq.data.data() + off, len, head_dim, Eigen::OuterStride<>(stride));
          ConstStridedMap km(pk.data.data() + off, len, head_dim, Eigen::OuterStride<>(stride));
          ConstStridedMap vm(pv.data.data() + off, len, head_dim, Eigen::OuterStride<>(stride));
          if (pv.requires_grad) {
            StridedMap dv(pv.grad.data() + off, len, head_dim, Eigen::OuterStride<>(stride));
            dv.noalias() += pm.transpose() * dout;
          }
          if (!pq.requires_grad && !pk.requires_grad) continue;
          dp.noalias() = dout * vm.transpose();
          for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(len); ++i) {
            const double dot = dp.row(i).dot(pm.row(i));
            ds.row(i) = pm.row(i).cwiseProduct((dp.row(i).array() - dot).matrix());
          }
          ds *= inv_sqrt;
          if (pq.requires_grad) {
            StridedMap dq(pq.grad.data() + off, len, head_dim, Eigen::OuterStride<>(stride));
            dq.noalias() += ds * km;
          }
          if (pk.requires_grad) {
            StridedMap dk(pk.grad.data() + off, len, head_dim, Eigen::OuterStride<>(stride));
            dk.noalias() += ds.transpose() * qm;
          }
        }
      });
}

}  // namespace

Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v, const std::vector<bool>& mask) {
  if (q.ndim() != 3) throw DimensionError("attention: expected [h x L x d], got " + shape_str(q.shape()));
  if (q.shape() != k.shape() || q.shape() != v.shape()) {
    throw DimensionError("attention: q/k/v shapes differ: " + shape_str(q.shape()) + ", " + shape_str(k.shape()) +
                         ", " + shape_str(v.shape()));
  }
  const std::size_t h = q.dim(0), len = q.dim(1), d = q.dim(2);
  if (len == 0 || d == 0) throw DimensionError("attention: zero-sized sequence or head dimension");
  if (mask.size() != len) throw DimensionError("attention: mask length differs from sequence length");
  std::vector<AttentionGroup> groups;
  for (std::size_t i = 0; i < h; ++i) groups.push_back({i * len * d, 0});
  return attention_kernel(q, k, v, std::move(groups), len, d, d, mask);
}

Tensor multi_head_attention(const Tensor& q, const Tensor& k, const Tensor& v, std::size_t batch, std::size_t heads,
                            const std::vector<bool>& key_mask) {
  require_2d(q, "multi_head_attention");
  if (q.shape() != k.shape() || q.shape() != v.shape()) {
    throw DimensionError("multi_head_attention: q/k/v shapes differ");
  }
  const std::size_t rows = q.dim(0), model_dim = q.dim(1);
  if (batch == 0 || heads == 0 || rows % batch != 0 || model_dim % heads != 0 || rows == 0) {
    throw DimensionError("multi_head_attention: " + shape_str(q.shape()) + " not divisible into batch " +
                         std::to_string(batch) + " x heads " + std::to_string(heads));
  }
  if (key_mask.size() != rows) throw DimensionError("multi_head_attention: mask length differs from rows");
  const std::size_t len = rows / batch, head_dim = model_dim / heads;
  std::vector<AttentionGroup> groups;
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t h = 0; h < heads; ++h) groups.push_back({b * len * model_dim + h * head_dim, b * len});
  }
  return attention_kernel(q, k, v, std::move(groups), len, head_dim, model_dim, key_mask);
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_numel(shape) != x.numel()) {
    throw DimensionError("reshape: " + shape_str(x.shape()) + " -> " + shape_str(shape));
  }
  std::vector<double> out(x.data().begin(), x.data().end());
  return Tensor::make_result(std::move(shape), std::move(out), {x}, [](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) px.grad[i] += self.grad[i];
  });
}

Tensor gather_rows(const Tensor& x, std::span<const std::size_t> idx) {
  require_2d(x, "gather_rows");
  const std::size_t n = x.dim(0), d = x.dim(1);
  std::vector<std::size_t> rows(idx.begin(), idx.end());
  std::vector<double> out(rows.size() * d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= n) throw IndexError("gather_rows: row " + std::to_string(rows[i]) + " of " + std::to_string(n));
    std::copy_n(x.data().data() + rows[i] * d, d, out.data() + i * d);
  }
  const std::size_t m = rows.size();
  return Tensor::make_result({m, d}, std::move(out), {x}, [rows = std::move(rows), d](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t c = 0; c < d; ++c) px.grad[rows[i] * d + c] += self.grad[i * d + c];
    }
  });
}

Tensor column(const Tensor& x, std::size_t j) {
  require_2d(x, "column");
  const std::size_t n = x.dim(0), c = x.dim(1);
  if (j >= c) throw IndexError("column: index " + std::to_string(j) + " of " + std::to_string(c));
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) out[r] = x.data()[r * c + j];
  return Tensor::make_result({n}, std::move(out), {x}, [j, c](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    for (std::size_t r = 0; r < self.grad.size(); ++r) px.grad[r * c + j] += self.grad[r];
  });
}

Tensor masked_fill(const Tensor& x, const std::vector<bool>& keep, double value) {
  if (keep.size() != x.numel()) throw DimensionError("masked_fill: mask size differs from " + shape_str(x.shape()));
  std::vector<double> out(x.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = keep[i] ? x.data()[i] : value;
  return Tensor::make_result(x.shape(), std::move(out), {x}, [keep](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i]) px.grad[i] += self.grad[i];
    }
  });
}

Tensor softmax_cross_entropy(const Tensor& logits, std::span<const int> targets) {
  require_2d(logits, "softmax_cross_entropy");
  const std::size_t b = logits.dim(0), c = logits.dim(1);
  if (targets.size() != b) {
    throw DimensionError("softmax_cross_entropy: " + std::to_string(targets.size()) + " targets for " +
                         shape_str(logits.shape()));
  }
  if (b == 0 || c == 0) throw DimensionError("softmax_cross_entropy: empty logits");
  std::vector<int> tgt(targets.begin(), targets.end());
  std::vector<double> probs(b * c);
  double total = 0.0;
  for (std::size_t r = 0; r < b; ++r) {
    if (tgt[r] < 0 || static_cast<std::size_t>(tgt[r]) >= c) {
      throw IndexError("softmax_cross_entropy: target " + std::to_string(tgt[r]) + " outside [0, " +
                       std::to_string(c) + ")");
    }
    const double* row = logits.data().data() + r * c;
    const double m = *std::max_element(row, row + c);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += (probs[r * c + j] = std::exp(row[j] - m));
    for (std::size_t j = 0; j < c; ++j) probs[r * c + j] /= z;
    total += (m + std::log(z)) - row[tgt[r]];
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  return Tensor::make_result(
      {1}, {total * inv_b}, {logits},
      [probs = std::move(probs), tgt = std::move(tgt), b, c, inv_b](detail::TensorImpl& self) {
        auto& px = parent(self, 0);
        const double g = self.grad[0] * inv_b;
        for (std::size_t r = 0; r < b; ++r) {
          for (std::size_t j = 0; j < c; ++j) {
            const double y = static_cast<int>(j) == tgt[r] ? 1.0 : 0.0;
            px.grad[r * c + j] += g * (probs[r * c + j] - y);
          }
        }
      });
}

Tensor bce_with_logits(const Tensor& logits, std::span<const int> labels) {
  const std::size_t n = logits.numel();
  if (labels.size() != n || n == 0) {
    throw DimensionError("bce_with_logits: " + std::to_string(labels.size()) + " labels for " +
                         shape_str(logits.shape()));
  }
  std::vector<int> y(labels.begin(), labels.end());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != 0 && y[i] != 1) throw IndexError("bce_with_logits: label " + std::to_string(y[i]) + " not in {0,1}");
    const double x = logits.data()[i];
    total += std::max(x, 0.0) - x * y[i] + std::log1p(std::exp(-std::abs(x)));
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  return Tensor::make_result({1}, {total * inv_n}, {logits}, [y = std::move(y), inv_n](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    const double g = self.grad[0] * inv_n;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(-px.data[i]));
      px.grad[i] += g * (s - y[i]);
    }
  });
}

Tensor sum(const Tensor& x) {
  double s = 0.0;
  for (double v : x.data()) s += v;
  return Tensor::make_result({1}, {s}, {x}, [](detail::TensorImpl& self) {
    auto& px = parent(self, 0);
    for (auto& g : px.grad) g += self.grad[0];
  });
}

Tensor mean(const Tensor& x) {
  if (x.numel() == 0) throw DimensionError("mean of empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(x.numel()));
}

}  // namespace mtlqa::ops
