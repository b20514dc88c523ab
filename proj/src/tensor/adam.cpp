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

#include "tensor/adam.hpp"

#include <cmath>
#include <sstream>

#include "common/error.hpp"

namespace mtlqa {

AdamState::AdamState(const ParameterSet& params, AdamHyper h) : hyper(h) {
  for (const auto& e : params.entries()) {
    first_moment.emplace_back(e.tensor.numel(), 0.0);
    second_moment.emplace_back(e.tensor.numel(), 0.0);
  }
}

void adam_step(ParameterSet& params, AdamState& state) {
  auto& entries = params.entries();
  if (entries.size() != state.first_moment.size()) {
    throw DimensionError("adam_step: optimizer state tracks " + std::to_string(state.first_moment.size()) +
                         " parameters, model has " + std::to_string(entries.size()));
  }
  for (std::size_t p = 0; p < entries.size(); ++p) {
    const auto& t = entries[p].tensor;
    if (state.first_moment[p].size() != t.numel()) {
      throw DimensionError("adam_step: state shape mismatch for '" + entries[p].name + "'");
    }
    if (!t.has_grad()) continue;
    const auto g = t.grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!std::isfinite(g[i])) {
        std::ostringstream os;
        os << "non-finite gradient in parameter '" << entries[p].name << "' " << shape_str(t.shape())
           << " at element " << i << " (value " << g[i] << ", step " << state.step_count + 1 << ")";
        throw InvariantError(os.str());
      }
    }
  }

  ++state.step_count;
  const auto& h = state.hyper;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(h.beta1, t);
  const double bc2 = 1.0 - std::pow(h.beta2, t);
  for (std::size_t p = 0; p < entries.size(); ++p) {
    auto& tensor = entries[p].tensor;
    auto theta = tensor.data();
    const bool has_grad = tensor.has_grad();
    auto& m = state.first_moment[p];
    auto& v = state.second_moment[p];
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double g = has_grad ? tensor.grad()[i] : 0.0;
      m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g;
      v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * g * g;
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      theta[i] -= h.lr * (m_hat / (std::sqrt(v_hat) + h.eps) + h.weight_decay * theta[i]);
    }
  }
}

}  // namespace mtlqa
