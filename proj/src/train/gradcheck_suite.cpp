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

#include "train/gradcheck_suite.hpp"

#include <algorithm>
#include <map>

#include "common/rng.hpp"
#include "model/model.hpp"
#include "tensor/ops.hpp"

namespace mtlqa::train {

namespace {

Tensor random_tensor(Shape shape, Rng& rng, double scale = 1.0) {
  std::vector<double> v(shape_numel(shape));
  for (auto& x : v) x = rng.normal() * scale;
  return Tensor::from(std::move(shape), std::move(v));
}

std::vector<int> random_targets(std::size_t n, std::size_t classes, Rng& rng) {
  std::vector<int> t(n);
  for (auto& x : t) x = static_cast<int>(rng.below(classes));
  return t;
}

FragmentResult summarize(const std::string& name, std::uint64_t seed, const GradcheckReport& r) {
  return {name, seed, r.max_rel_error(), r.passed()};
}

FragmentResult check_linear(std::uint64_t seed, double tol) {
  Rng rng(derive_seed(seed, 1));
  const Tensor x = random_tensor({4, 5}, rng);
  ParameterSet ps;
  const Tensor w = ps.add("w", random_tensor({5, 3}, rng, 0.5));
  const Tensor b = ps.add("b", random_tensor({3}, rng, 0.5));
  const auto targets = random_targets(4, 3, rng);
  return summarize("linear", seed,
                   gradcheck([&] { return ops::softmax_cross_entropy(ops::linear(x, w, b), targets); }, ps, tol));
}

FragmentResult check_fusion(std::uint64_t seed, double tol) {
  Rng rng(derive_seed(seed, 2));
  const std::size_t n = 6, dt = 4, de = 3;
  ParameterSet ps;
  const Tensor w = ps.add("tokens", random_tensor({n, dt}, rng));
  const Tensor e = ps.add("entities", random_tensor({n, de}, rng));
  const Tensor wt = ps.add("w_t", random_tensor({dt, dt}, rng, 0.5));
  const Tensor we = ps.add("w_e", random_tensor({de, dt}, rng, 0.5));
  const Tensor b = ps.add("b", random_tensor({dt}, rng, 0.5));
  std::vector<double> flags(n);
  for (std::size_t i = 0; i < n; ++i) flags[i] = (i % 2 == 0) ? 1.0 : 0.0;
  const auto targets = random_targets(n, dt, rng);
  return summarize("fusion", seed, gradcheck([&] {
                     return ops::softmax_cross_entropy(model::fuse(w, e, flags, wt, we, b), targets);
                   }, ps, tol));
}

// Two sequences of length 16 through a 2-layer model.
model::Batch tiny_batch(Rng& rng, std::size_t vocab) {
  const std::size_t len = 16;
  std::vector<text::EncodedPair> pairs(2);
  for (std::size_t s = 0; s < 2; ++s) {
    auto& p = pairs[s];
    const std::size_t used = s == 0 ? len : len - 3;
    const std::size_t q_end = 5;
    for (std::size_t t = 0; t < len; ++t) {
      const bool real = t < used;
      int tok = text::kPadId;
      if (real) tok = (t == 0) ? text::kClsId : (t == q_end || t + 1 == used) ? text::kSepId
                                                   : static_cast<int>(4 + rng.below(vocab - 4));
      p.token_ids.push_back(tok);
      p.segment_ids.push_back(real && t > q_end ? 1 : 0);
      p.attention_mask.push_back(real);
      p.entity_ids.push_back(real && rng.bernoulli(0.5) ? static_cast<int>(1 + rng.below(19)) : 0);
    }
    p.context_begin = q_end + 1;
    p.context_end = used - 1;
    p.answer_start_tok = static_cast<int>(p.context_begin + rng.below(3));
    p.answer_end_tok = p.answer_start_tok + static_cast<int>(rng.below(3));
  }
  std::vector<const text::EncodedPair*> ptrs{&pairs[0], &pairs[1]};
  std::vector<int> lf{static_cast<int>(rng.below(9)), static_cast<int>(rng.below(9))};
  return model::make_batch(ptrs, lf);
}

std::string group_of(const std::string& name) {
  if (name.rfind("tok.", 0) == 0 || name.rfind("enc", 0) == 0) return "encoder";
  if (name.rfind("ent", 0) == 0) return "entity_encoder";
  if (name.rfind("fuse.", 0) == 0) return "fusion";
  if (name.rfind("span.", 0) == 0) return "span_head";
  if (name.rfind("lf.", 0) == 0) return "lf_head";
  return "other";
}

std::vector<FragmentResult> check_model(std::uint64_t seed, double tol) {
  Rng rng(derive_seed(seed, 3));
  model::ModelConfig cfg;
  cfg.vocab_size = 24;
  cfg.hidden_dim = 8;
  cfg.layers = 2;
  cfg.heads = 2;
  cfg.ffn_dim = 16;
  cfg.max_positions = 16;
  cfg.entity_dim = 6;
  cfg.entity_heads = 2;
  cfg.entity_layers = 1;
  cfg.dropout = 0.0;
  cfg.omega = 0.3;
  cfg.init_seed = seed;
  model::Model m(cfg);
  // Larger weights than the 0.02 init so every path carries a measurable gradient.
  for (auto& e : m.params().entries()) {
    if (e.name.find(".g") != std::string::npos || e.name.find(".b") != std::string::npos) continue;
    for (auto& v : e.tensor.data()) v *= 15.0;
  }
  const auto batch = tiny_batch(rng, cfg.vocab_size);
  auto loss = [&] {
    const auto out = m.forward(batch, nullptr);
    return model::multitask_loss(out, batch.start, batch.end, batch.lf, cfg.omega).total;
  };
  const auto report = gradcheck(loss, m.params(), tol);
  std::map<std::string, FragmentResult> groups;
  for (const auto& e : report.entries) {
    const auto g = group_of(e.name);
    auto it = groups.find(g);
    if (it == groups.end()) it = groups.emplace(g, FragmentResult{g, seed, 0.0, true}).first;
    it->second.max_rel_error = std::max(it->second.max_rel_error, e.max_rel_error);
    it->second.passed = it->second.passed && e.passed;
  }
  std::vector<FragmentResult> out;
  for (auto& [g, r] : groups) out.push_back(r);
  return out;
}

}  // namespace

bool GradcheckSuiteResult::passed() const {
  return !fragments.empty() &&
         std::all_of(fragments.begin(), fragments.end(), [](const FragmentResult& f) { return f.passed; });
}

nlohmann::json GradcheckSuiteResult::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : fragments) {
    arr.push_back({{"fragment", f.fragment}, {"seed", f.seed}, {"max_rel_error", f.max_rel_error}, {"passed", f.passed}});
  }
  return {{"tolerance", tolerance}, {"passed", passed()}, {"fragments", arr}};
}

GradcheckSuiteResult run_gradcheck_suite(const std::vector<std::uint64_t>& seeds, double tolerance) {
  GradcheckSuiteResult r;
  r.tolerance = tolerance;
  for (std::uint64_t seed : seeds) {
    r.fragments.push_back(check_linear(seed, tolerance));
    r.fragments.push_back(check_fusion(seed, tolerance));
    for (auto& f : check_model(seed, tolerance)) r.fragments.push_back(f);
  }
  return r;
}

}  // namespace mtlqa::train
