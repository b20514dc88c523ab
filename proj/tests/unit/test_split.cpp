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

#include <algorithm>
#include <numeric>
#include <set>

#include "common/error.hpp"
#include "corpus/build.hpp"
#include "split/splitter.hpp"

using namespace mtlqa;
using namespace mtlqa::split;

static std::vector<int> iota_ids(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

TEST_CASE("split_notes: proportional sizes, determinism, degenerate ratios") {
  const auto ids = iota_ids(524);
  const std::array<double, 3> r{433.0 / 524, 44.0 / 524, 47.0 / 524};
  const auto p = split_notes(ids, r, 7);
  CHECK(p.train.size() == 433);
  CHECK(p.val.size() == 44);
  CHECK(p.test.size() == 47);
  const auto q = split_notes(ids, r, 7);
  CHECK(p.train == q.train);
  CHECK(p.val == q.val);
  CHECK(p.test == q.test);

  std::set<int> all(p.train.begin(), p.train.end());
  all.insert(p.val.begin(), p.val.end());
  all.insert(p.test.begin(), p.test.end());
  CHECK(all.size() == 524);

  const auto everything = split_notes(iota_ids(10), {1.0, 0.0, 0.0}, 1);
  CHECK(everything.train.size() == 10);
  CHECK(everything.val.empty());
  CHECK(everything.test.empty());

  CHECK_THROWS_AS(split_notes(iota_ids(2), {0.7, 0.15, 0.15}, 1), ConfigError);
  CHECK_THROWS_AS(split_notes(iota_ids(10), {0.5, 0.2, 0.2}, 1), ConfigError);
}

TEST_CASE("partition_templates: floor rule with non-empty clamp") {
  std::map<int, std::vector<int>> by_lf{{0, iota_ids(6)}, {1, {10, 11, 12, 13, 14, 15, 16, 17, 18, 19}}, {2, {30}},
                                        {3, {40, 41}}};
  const auto parts = partition_templates(by_lf, 0.7, 3);
  CHECK(parts.at(0).train.size() == 4);
  CHECK(parts.at(0).eval.size() == 2);
  CHECK(parts.at(1).train.size() == 7);
  CHECK(parts.at(1).eval.size() == 3);
  CHECK(parts.at(2).train == std::vector<int>{30});
  CHECK(parts.at(2).eval.empty());
  CHECK(parts.at(3).train.size() == 1);
  CHECK(parts.at(3).eval.size() == 1);
  for (const auto& [lf, p] : parts) {
    std::set<int> u(p.train.begin(), p.train.end());
    for (int t : p.eval) CHECK(u.insert(t).second);
    CHECK(u.size() == by_lf.at(lf).size());
  }
  CHECK_THROWS_AS(partition_templates(by_lf, 1.0, 3), ConfigError);
  CHECK_THROWS_AS(partition_templates(by_lf, 0.0, 3), ConfigError);
}

TEST_CASE("filter_examples: pl discards unseen-template train rows, r keeps them") {
  corpus::GeneratorConfig g;
  g.num_notes = 30;
  const auto bundle = corpus::build_corpus(g, "sentence");
  const auto& tpls = corpus::default_question_templates();
  const auto pl = make_assignment(bundle.examples, tpls, SplitMode::kParaphrase, 0.7, 4, {0.7, 0.15, 0.15});
  auto r = pl;
  r.mode = SplitMode::kRandom;
  const auto spl = filter_examples(bundle.examples, pl);
  const auto sr = filter_examples(bundle.examples, r);

  std::set<int> eval_templates;
  for (const auto& [lf, p] : pl.templates) eval_templates.insert(p.eval.begin(), p.eval.end());
  for (const auto& ex : spl.train) CHECK(eval_templates.count(ex.question_template_id) == 0);
  for (const auto& ex : spl.test) CHECK(eval_templates.count(ex.question_template_id) == 1);

  CHECK(sr.train.size() > spl.train.size());
  std::set<std::string> r_ids;
  for (const auto& ex : sr.train) r_ids.insert(ex.id);
  for (const auto& ex : spl.train) CHECK(r_ids.count(ex.id) == 1);

  const auto empty = filter_examples({}, pl);
  CHECK(empty.train.empty());
  CHECK(empty.val.empty());
  CHECK(empty.test.empty());

  auto bad = bundle.examples;
  bad[0].question_template_id = 9999;
  CHECK_THROWS_AS(filter_examples(bad, pl), DataError);
}

TEST_CASE("audit: zero leakage over 20 seeds") {
  corpus::GeneratorConfig g;
  g.num_notes = 25;
  const auto bundle = corpus::build_corpus(g, "sentence");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a =
        make_assignment(bundle.examples, corpus::default_question_templates(), SplitMode::kParaphrase, 0.7, seed,
                        {0.7, 0.15, 0.15});
    const auto audit_result = audit(filter_examples(bundle.examples, a));
    CHECK(audit_result.template_overlap == 0);
    CHECK(audit_result.note_overlap == 0);
  }
}

TEST_CASE("assignment JSON round trip") {
  corpus::GeneratorConfig g;
  g.num_notes = 12;
  const auto bundle = corpus::build_corpus(g, "sentence");
  const auto a = make_assignment(bundle.examples, corpus::default_question_templates(), SplitMode::kRandom, 0.7, 9,
                                 {0.6, 0.2, 0.2});
  const auto b = assignment_from_json(assignment_to_json(a));
  CHECK(assignment_to_json(b) == assignment_to_json(a));
  CHECK(b.mode == SplitMode::kRandom);
  CHECK_THROWS_AS(assignment_from_json(nlohmann::json{{"mode", "pl"}}), DataError);
  CHECK_THROWS_AS(parse_mode("x"), ConfigError);
}
