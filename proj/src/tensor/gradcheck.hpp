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

#include <functional>
#include <string>
#include <vector>

#include "tensor/tensor.hpp"

namespace mtlqa {

struct GradcheckEntry {
  std::string name;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;  // max |analytic - numeric| over max(largest gradient magnitude, floor)
  bool passed = false;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double tolerance = 0.0;
  bool passed() const;
  double max_rel_error() const;
};

// Compares analytic gradients of the scalar returned by `loss_fn` against
// central differences for every element of every parameter. `loss_fn` must
// rebuild the graph on each call and be deterministic. `floor` bounds the
// denominator of the relative error so that parameters whose true gradient is
// zero (attention key biases, for one) are judged on absolute rounding noise.
GradcheckReport gradcheck(const std::function<Tensor()>& loss_fn, ParameterSet& params, double tolerance,
                          double step = 1e-5, double floor = 1e-6);

}  // namespace mtlqa
