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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <unistd.h>

#include "common/error.hpp"
#include "helpers.hpp"
#include "tensor/adam.hpp"
#include "tensor/checkpoint.hpp"
#include "tensor/gradcheck.hpp"
#include "tensor/ops.hpp"

using namespace mtlqa;
using mtlqa::testing::max_abs_diff;
using mtlqa::testing::random_tensor;

TEST_CASE("matmul: identity and hand-expanded products") {
  Rng rng(5);
  const auto b = random_tensor({3, 4}, rng, 1.0, false);
  const auto eye = Tensor::from({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  const auto ib = ops::matmul(eye, b);
  CHECK(max_abs_diff(ib.data(), b.data()) == 0.0);

  const auto r = ops::matmul(Tensor::from({2, 2}, {1, 2, 3, 4}), Tensor::from({2, 1}, {1, 1}));
  CHECK(r.shape() == Shape{2, 1});
  CHECK(r.at(0) == 3.0);
  CHECK(r.at(1) == 7.0);
}

TEST_CASE("matmul: shape mismatch names both shapes") {
  try {
    ops::matmul(Tensor::zeros({2, 3}), Tensor::zeros({2, 3}));
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("[2x3]") != std::string::npos);
  }
}

TEST_CASE("matmul: backward of sum(AxB) matches finite differences") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    ParameterSet ps;
    const Tensor a = ps.add("a", random_tensor({3, 4}, rng));
    const Tensor b = ps.add("b", random_tensor({4, 2}, rng));
    const auto rep = gradcheck([&] { return ops::sum(ops::matmul(a, b)); }, ps, 1e-6);
    CHECK(rep.passed());
  }
}

TEST_CASE("softmax_cross_entropy: oracle values and stability") {
  const int t0[] = {0};
  CHECK(ops::softmax_cross_entropy(Tensor::from({1, 2}, {0, 0}), t0).item() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const double big = ops::softmax_cross_entropy(Tensor::from({1, 2}, {1000, 0}), t0).item();
  CHECK(std::isfinite(big));
  CHECK(big == doctest::Approx(0.0));
  const int bad[] = {2};
  CHECK_THROWS_AS(ops::softmax_cross_entropy(Tensor::from({1, 2}, {0, 0}), bad), IndexError);
  const int neg[] = {-1};
  CHECK_THROWS_AS(ops::softmax_cross_entropy(Tensor::from({1, 2}, {0, 0}), neg), IndexError);
}

TEST_CASE("softmax_cross_entropy: gradient over random 4x5 logits") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    ParameterSet ps;
    const Tensor logits = ps.add("logits", random_tensor({4, 5}, rng));
    std::vector<int> targets(4);
    for (auto& t : targets) t = static_cast<int>(rng.below(5));
    CHECK(gradcheck([&] { return ops::softmax_cross_entropy(logits, targets); }, ps, 1e-6).passed());
  }
}

// Loop-based reference for one head.
static std::vector<double> naive_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                                           const std::vector<bool>& mask) {
  const std::size_t h = q.dim(0), L = q.dim(1), d = q.dim(2);
  std::vector<double> out(h * L * d, 0.0);
  for (std::size_t hh = 0; hh < h; ++hh) {
    for (std::size_t i = 0; i < L; ++i) {
      std::vector<double> s(L, -std::numeric_limits<double>::infinity());
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < L; ++j) {
        if (!mask[j]) continue;
        double dot = 0.0;
        for (std::size_t c = 0; c < d; ++c) dot += q.at((hh * L + i) * d + c) * k.at((hh * L + j) * d + c);
        s[j] = dot / std::sqrt(static_cast<double>(d));
        mx = std::max(mx, s[j]);
      }
      double z = 0.0;
      for (std::size_t j = 0; j < L; ++j) z += mask[j] ? std::exp(s[j] - mx) : 0.0;
      for (std::size_t j = 0; j < L; ++j) {
        if (!mask[j]) continue;
        const double p = std::exp(s[j] - mx) / z;
        for (std::size_t c = 0; c < d; ++c) out[(hh * L + i) * d + c] += p * v.at((hh * L + j) * d + c);
      }
    }
  }
  return out;
}

TEST_CASE("attention: matches loop reference, 2 heads, L=3, d=4") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const auto q = random_tensor({2, 3, 4}, rng, 1.0, false);
    const auto k = random_tensor({2, 3, 4}, rng, 1.0, false);
    const auto v = random_tensor({2, 3, 4}, rng, 1.0, false);
    for (const std::vector<bool>& mask : {std::vector<bool>{true, true, true}, std::vector<bool>{true, false, true}}) {
      const auto out = ops::attention(q, k, v, mask);
      CHECK(max_abs_diff(out.data(), naive_attention(q, k, v, mask)) <= 1e-9);
    }
  }
}

TEST_CASE("attention: identical keys give the mean of unmasked values") {
  Rng rng(3);
  const auto q = random_tensor({1, 4, 2}, rng, 1.0, false);
  const auto k = Tensor::full({1, 4, 2}, 0.7);
  const auto v = random_tensor({1, 4, 2}, rng, 1.0, false);
  const std::vector<bool> mask{true, true, false, true};
  const auto out = ops::attention(q, k, v, mask);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      const double mean = (v.at(0 * 2 + c) + v.at(1 * 2 + c) + v.at(3 * 2 + c)) / 3.0;
      CHECK(out.at(i * 2 + c) == doctest::Approx(mean).epsilon(1e-12));
    }
  }
}

TEST_CASE("attention: masking all but position 0 copies v[0]") {
  Rng rng(4);
  const auto q = random_tensor({2, 3, 2}, rng, 1.0, false);
  const auto k = random_tensor({2, 3, 2}, rng, 1.0, false);
  const auto v = random_tensor({2, 3, 2}, rng, 1.0, false);
  const auto out = ops::attention(q, k, v, {true, false, false});
  for (std::size_t h = 0; h < 2; ++h) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t c = 0; c < 2; ++c) CHECK(out.at((h * 3 + i) * 2 + c) == v.at(h * 3 * 2 + c));
    }
  }
}

TEST_CASE("attention: shape errors") {
  CHECK_THROWS_AS(ops::attention(Tensor::zeros({2, 3}), Tensor::zeros({2, 3}), Tensor::zeros({2, 3}), {true, true}),
                  DimensionError);
  CHECK_THROWS_AS(
      ops::attention(Tensor::zeros({1, 3, 2}), Tensor::zeros({1, 3, 3}), Tensor::zeros({1, 3, 2}), {true, true, true}),
      DimensionError);
}

TEST_CASE("softmax rows sum to one and layer norm standardizes rows") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const auto x = random_tensor({5, 7}, rng, 3.0, false);
    const auto s = ops::softmax(x);
    for (std::size_t r = 0; r < 5; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < 7; ++c) sum += s.at(r * 7 + c);
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
    const auto y = ops::layer_norm(x, Tensor::full({7}, 1.0), Tensor::zeros({7}));
    for (std::size_t r = 0; r < 5; ++r) {
      double mean = 0.0, var = 0.0;
      for (std::size_t c = 0; c < 7; ++c) mean += y.at(r * 7 + c) / 7.0;
      for (std::size_t c = 0; c < 7; ++c) var += (y.at(r * 7 + c) - mean) * (y.at(r * 7 + c) - mean) / 7.0;
      CHECK(std::abs(mean) <= 1e-7);
      CHECK(std::abs(var - 1.0) <= 1e-5);
    }
  }
}

TEST_CASE("every differentiable op passes gradcheck over 10 seeds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed * 31);
    ParameterSet ps;
    const Tensor x = ps.add("x", random_tensor({3, 4}, rng));
    const Tensor y = ps.add("y", random_tensor({3, 4}, rng));
    const Tensor w = ps.add("w", random_tensor({4, 4}, rng, 0.5));
    const Tensor b = ps.add("b", random_tensor({4}, rng, 0.5));
    const Tensor g = ps.add("g", random_tensor({4}, rng, 0.5));
    const Tensor emb = ps.add("emb", random_tensor({5, 4}, rng));
    const Tensor qkv = ps.add("qkv", random_tensor({2, 3, 4}, rng));
    const std::vector<double> factors{1.0, 0.0, 2.0};
    const int ids[] = {0, 3, 3, 4};
    const int labels[] = {1, 0, 1, 1};
    const std::size_t rows[] = {2, 0};
    const std::vector<bool> keep{true, false, true, true, true, true, false, true, true, true, true, true};
    // Weighted sum so each op's output gradient is non-uniform.
    auto probe = [](const Tensor& t) {
      std::vector<double> c(t.numel());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::sin(1.0 + static_cast<double>(i));
      return ops::sum(ops::matmul(ops::reshape(t, {1, t.numel()}), Tensor::from({t.numel(), 1}, c)));
    };
    auto check = [&](const char* name, auto fn) {
      const auto rep = gradcheck([&] { return probe(fn()); }, ps, 1e-4);
      INFO(name << " seed " << seed << " err " << rep.max_rel_error());
      CHECK(rep.passed());
    };
    check("add", [&] { return ops::add(x, y); });
    check("add_bias", [&] { return ops::add_bias(x, b); });
    check("linear", [&] { return ops::linear(x, w, b); });
    check("scale", [&] { return ops::scale(x, -1.7); });
    check("scale_rows", [&] { return ops::scale_rows(x, factors); });
    check("gelu", [&] { return ops::gelu(x); });
    check("layer_norm", [&] { return ops::layer_norm(x, g, b); });
    check("embedding", [&] { return ops::embedding(emb, ids); });
    check("softmax", [&] { return ops::softmax(x); });
    check("attention", [&] { return ops::attention(qkv, ops::scale(qkv, 0.5), ops::gelu(qkv), {true, true, false}); });
    check("mha", [&] {
      return ops::multi_head_attention(x, ops::scale(x, 0.3), y, 1, 2, {true, false, true});
    });
    check("gather_rows", [&] { return ops::gather_rows(x, rows); });
    check("column", [&] { return ops::column(x, 1); });
    check("masked_fill", [&] { return ops::masked_fill(x, keep, -3.0); });
    check("bce", [&] { return ops::bce_with_logits(ops::column(x, 0), std::span<const int>(labels, 3)); });
    check("mean", [&] { return ops::mean(x); });
  }
}

TEST_CASE("adam: null update decays only by weight decay") {
  ParameterSet ps;
  ps.add("p", Tensor::from({2}, {1.0, -2.0}, true));
  AdamState st(ps, AdamHyper{0.1, 0.9, 0.999, 1e-8, 0.01});
  ps.get("p").mutable_grad();  // zero gradient
  adam_step(ps, st);
  CHECK(ps.get("p").at(0) == doctest::Approx(1.0 - 0.1 * 0.01 * 1.0).epsilon(1e-12));
  CHECK(ps.get("p").at(1) == doctest::Approx(-2.0 - 0.1 * 0.01 * -2.0).epsilon(1e-12));
  CHECK(st.step_count == 1);
}

TEST_CASE("adam: single step with unit gradient moves by lr") {
  ParameterSet ps;
  ps.add("p", Tensor::from({1}, {0.5}, true));
  AdamState st(ps, AdamHyper{0.1, 0.9, 0.999, 1e-8, 0.0});
  ps.get("p").mutable_grad()[0] = 1.0;
  adam_step(ps, st);
  CHECK(ps.get("p").at(0) - 0.5 == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("adam: quadratic loss decreases monotonically") {
  ParameterSet ps;
  ps.add("p", Tensor::from({3}, {2.0, -1.0, 0.5}, true));
  AdamState st(ps, AdamHyper{0.05, 0.9, 0.999, 1e-8, 0.0});
  auto loss = [&] { return ops::sum(ops::matmul(ops::reshape(ps.get("p"), {1, 3}), ops::reshape(ps.get("p"), {3, 1}))); };
  double prev = loss().item();
  for (int i = 0; i < 5; ++i) {
    ps.zero_grad();
    auto l = loss();
    l.backward();
    adam_step(ps, st);
    const double now = loss().item();
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("adam: non-finite gradient aborts before any change, naming the parameter") {
  ParameterSet ps;
  ps.add("ok", Tensor::from({1}, {1.0}, true));
  ps.add("broken.weight", Tensor::from({1}, {1.0}, true));
  AdamState st(ps, AdamHyper{});
  ps.get("ok").mutable_grad()[0] = 1.0;
  ps.get("broken.weight").mutable_grad()[0] = std::numeric_limits<double>::quiet_NaN();
  try {
    adam_step(ps, st);
    FAIL("expected InvariantError");
  } catch (const InvariantError& e) {
    CHECK(std::string(e.what()).find("broken.weight") != std::string::npos);
  }
  CHECK(ps.get("ok").at(0) == 1.0);
  CHECK(st.step_count == 0);
}

TEST_CASE("backward populates grads on every requires_grad leaf") {
  Rng rng(9);
  auto a = random_tensor({2, 3}, rng);
  auto b = random_tensor({3, 2}, rng);
  auto unused_path = random_tensor({2, 2}, rng);
  auto l = ops::sum(ops::add(ops::matmul(a, b), ops::scale(unused_path, 0.0)));
  l.backward();
  CHECK(a.has_grad());
  CHECK(b.has_grad());
  CHECK(unused_path.has_grad());
}

TEST_CASE("ops are deterministic given a seeded RNG") {
  auto run = [] {
    Rng rng(77);
    const auto x = random_tensor({4, 6}, rng, 1.0, false);
    Rng drop(5);
    return ops::dropout(ops::gelu(x), 0.3, drop);
  };
  const auto a = run(), b = run();
  CHECK(max_abs_diff(a.data(), b.data()) == 0.0);
  Rng none(1);
  Rng rng(2);
  const auto x = random_tensor({3, 3}, rng, 1.0, false);
  CHECK(max_abs_diff(ops::dropout(x, 0.0, none).data(), x.data()) == 0.0);
}

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("mtlqa_test_" + std::to_string(::getpid()) + "_" +
                                                     std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("checkpoint: round trip, digest and corruption") {
  TempDir dir;
  Rng rng(12);
  ParameterSet ps;
  ps.add("enc.w", random_tensor({3, 4}, rng));
  ps.add("enc.b", random_tensor({4}, rng));
  const auto path = dir.file("model.ckpt");
  save_checkpoint(path, ps, 0xabcdef);

  const auto contents = read_checkpoint(path);
  CHECK(contents.version == kCheckpointVersion);
  CHECK(contents.config_digest == 0xabcdef);
  REQUIRE(contents.records.size() == 2);
  CHECK(contents.records[0].name == "enc.w");
  CHECK(contents.records[0].shape == Shape{3, 4});

  {
    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "MTLQ");
  }

  ParameterSet other;
  other.add("enc.w", Tensor::zeros({3, 4}, true));
  other.add("enc.b", Tensor::zeros({4}, true));
  load_checkpoint(path, other, 0xabcdef);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(other.get("enc.w").at(i) == static_cast<double>(static_cast<float>(ps.get("enc.w").at(i))));
  }

  CHECK_THROWS_AS(load_checkpoint(path, other, 0x123), IntegrityError);
  ParameterSet wrong_shape;
  wrong_shape.add("enc.w", Tensor::zeros({4, 3}, true));
  wrong_shape.add("enc.b", Tensor::zeros({4}, true));
  CHECK_THROWS_AS(load_checkpoint(path, wrong_shape, 0xabcdef), IntegrityError);
  ParameterSet missing;
  missing.add("enc.w", Tensor::zeros({3, 4}, true));
  CHECK_THROWS_AS(load_checkpoint(path, missing, 0xabcdef), IntegrityError);

  // Truncated and bad-magic files.
  const auto bytes = std::filesystem::file_size(path);
  std::filesystem::copy_file(path, dir.file("trunc.ckpt"));
  std::filesystem::resize_file(dir.file("trunc.ckpt"), bytes - 5);
  CHECK_THROWS_AS(read_checkpoint(dir.file("trunc.ckpt")), IntegrityError);
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(read_checkpoint(path), IntegrityError);
}
