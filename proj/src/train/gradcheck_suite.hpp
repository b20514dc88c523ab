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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tensor/gradcheck.hpp"

namespace mtlqa::train {

struct FragmentResult {
  std::string fragment;  // linear, fusion, entity_encoder, encoder, span_head, lf_head
  std::uint64_t seed = 0;
  double max_rel_error = 0.0;
  bool passed = false;
};

struct GradcheckSuiteResult {
  std::vector<FragmentResult> fragments;
  double tolerance = 0.0;
  bool passed() const;
  nlohmann::json to_json() const;
};

// Finite-difference checks of every differentiable model component on small
// random inputs, one pass per seed. Dropout is disabled throughout.
GradcheckSuiteResult run_gradcheck_suite(const std::vector<std::uint64_t>& seeds, double tolerance);

}  // namespace mtlqa::train
