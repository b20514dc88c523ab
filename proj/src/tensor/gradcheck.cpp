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

#include "tensor/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace mtlqa {

bool GradcheckReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const GradcheckEntry& e) { return e.passed; });
}

double GradcheckReport::max_rel_error() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_rel_error);
  return m;
}

GradcheckReport gradcheck(const std::function<Tensor()>& loss_fn, ParameterSet& params, double tolerance,
                          double step, double floor) {
  GradcheckReport report;
  report.tolerance = tolerance;

  params.zero_grad();
  Tensor loss = loss_fn();
  loss.backward();

  for (auto& e : params.entries()) {
    auto values = e.tensor.data();
    std::vector<double> analytic(values.size(), 0.0);
    if (e.tensor.has_grad()) std::copy(e.tensor.grad().begin(), e.tensor.grad().end(), analytic.begin());

    double max_abs = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double orig = values[i];
      values[i] = orig + step;
      const double up = loss_fn().item();
      values[i] = orig - step;
      const double down = loss_fn().item();
      values[i] = orig;
      const double numeric = (up - down) / (2.0 * step);
      max_abs = std::max(max_abs, std::abs(analytic[i] - numeric));
      scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric)});
    }
    GradcheckEntry entry;
    entry.name = e.name;
    entry.max_abs_error = max_abs;
    entry.max_rel_error = max_abs / std::max(scale, floor);
    entry.passed = entry.max_rel_error <= tolerance;
    report.entries.push_back(entry);
  }
  params.zero_grad();
  return report;
}

}  // namespace mtlqa
