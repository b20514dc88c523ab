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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mtlqa/mtlqa.h"

using nlohmann::json;

namespace {

// Runs one C API call that hands back a JSON string and parses it.
template <class F>
json call(mtlqa_status expected, F&& fn) {
  char* out = nullptr;
  const mtlqa_status st = fn(&out);
  CHECK_MESSAGE(st == expected, mtlqa_last_error());
  json j = out ? json::parse(out) : json();
  mtlqa_string_free(out);
  return j;
}

struct Workspace {
  std::filesystem::path root;
  Workspace() {
    root = std::filesystem::temp_directory_path() / "mtlqa_capi";
    std::filesystem::remove_all(root);
    std::filesystem::create_directories(root);
  }
  std::string path(const char* leaf) const { return (root / leaf).string(); }
};

const char* kGen = R"({"gen": {"num_notes": 10}})";
const char* kSplit = R"({"split": {"val_frac": 0.2, "test_frac": 0.2}})";
const char* kTrain =
    R"({"model": {"hidden_dim": 16, "layers": 1, "heads": 2, "entity_dim": 8, "entity_heads": 2},
        "train": {"lr": 0.001, "max_steps": 6, "eval_every": 3, "batch_size": 8}})";

}  // namespace

TEST_CASE("NULL arguments are usage errors with a message") {
  char* out = nullptr;
  CHECK(mtlqa_gen_data(nullptr, nullptr, &out) == MTLQA_ERR_USAGE);
  CHECK(std::string(mtlqa_last_error()).size() > 0);
  CHECK(mtlqa_lf_tokenize("x", nullptr) == MTLQA_ERR_USAGE);
  mtlqa_model* m = nullptr;
  CHECK(mtlqa_model_load(nullptr, &m) == MTLQA_ERR_USAGE);
  CHECK(m == nullptr);
  CHECK(mtlqa_dataset_size(nullptr) == 0);
  mtlqa_model_free(nullptr);
  mtlqa_dataset_free(nullptr);
  mtlqa_string_free(nullptr);
  CHECK(std::string(mtlqa_version()).size() > 0);
}

TEST_CASE("lf_tokenize returns the token list") {
  const auto toks = call(MTLQA_OK, [](char** o) { return mtlqa_lf_tokenize("has_dosage(|medication|,x)", o); });
  REQUIRE(toks.is_array());
  CHECK(toks == json::array({"has_dosage", "|medication|", "x"}));
  // Unbalanced input is still split, never rejected.
  const auto open = call(MTLQA_OK, [](char** o) { return mtlqa_lf_tokenize("has_dosage(", o); });
  CHECK(open == json::array({"has_dosage"}));
}

TEST_CASE("bad settings: unknown keys and malformed JSON") {
  Workspace w;
  call(MTLQA_ERR_USAGE, [&](char** o) { return mtlqa_gen_data(R"({"gen": {"nots": 3}})", w.path("d").c_str(), o); });
  CHECK(std::string(mtlqa_last_error()).find("nots") != std::string::npos);
  call(MTLQA_ERR_USAGE, [&](char** o) { return mtlqa_gen_data("{", w.path("d").c_str(), o); });
  call(MTLQA_ERR_USAGE, [&](char** o) { return mtlqa_gradcheck(R"({"gradcheck": {"tolerance": -1}})", o); });
}

TEST_CASE("end to end through handles: data, split, train, load, answer, evaluate") {
  Workspace w;
  const auto data = w.path("data"), splits = w.path("splits"), run = w.path("run");
  const auto gen = call(MTLQA_OK, [&](char** o) { return mtlqa_gen_data(kGen, data.c_str(), o); });
  CHECK(gen["num_examples"].get<int>() > 0);
  call(MTLQA_OK, [&](char** o) { return mtlqa_split(kSplit, data.c_str(), splits.c_str(), o); });
  const std::string split_path = (std::filesystem::path(splits) / "split.json").string();
  REQUIRE(std::filesystem::exists(split_path));
  call(MTLQA_OK, [&](char** o) { return mtlqa_train(kTrain, data.c_str(), split_path.c_str(), run.c_str(), o); });

  mtlqa_model* model = nullptr;
  REQUIRE(mtlqa_model_load(run.c_str(), &model) == MTLQA_OK);
  const auto cfg = call(MTLQA_OK, [&](char** o) { return mtlqa_model_config(model, o); });
  CHECK(cfg["model"]["hidden_dim"] == 16);
  const auto ans = call(MTLQA_OK, [&](char** o) {
    return mtlqa_model_answer(model, "What is the dose of aspirin?", "Aspirin 40 mg daily was started.", o);
  });
  CHECK(ans.contains("answer"));
  call(MTLQA_ERR_USAGE, [&](char** o) { return mtlqa_model_answer(model, nullptr, "x", o); });

  mtlqa_dataset* ds = nullptr;
  const auto test_path = (std::filesystem::path(data) / "examples.jsonl").string();
  REQUIRE(mtlqa_dataset_open(test_path.c_str(), &ds) == MTLQA_OK);
  CHECK(mtlqa_dataset_size(ds) == gen["num_examples"].get<std::size_t>());
  const auto rep = call(MTLQA_OK, [&](char** o) { return mtlqa_model_evaluate(model, ds, o); });
  CHECK(rep["em"].get<double>() >= 0.0);
  CHECK(rep["token_f1"].get<double>() <= 1.0);
  mtlqa_dataset_free(ds);

  const auto ev = call(MTLQA_OK, [&](char** o) {
    return mtlqa_eval(run.c_str(), data.c_str(), split_path.c_str(), "test", o);
  });
  CHECK(ev.contains("token_f1"));
  call(MTLQA_ERR_USAGE, [&](char** o) { return mtlqa_eval(run.c_str(), data.c_str(), split_path.c_str(), "dev", o); });
  mtlqa_model_free(model);

  // A flipped byte in the checkpoint is an integrity failure.
  const auto ckpt = (std::filesystem::path(run) / "model.ckpt").string();
  REQUIRE(std::filesystem::exists(ckpt));
  {
    std::fstream f(ckpt, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(-5, std::ios::end);
    char c = 0;
    f.read(&c, 1);
    c = static_cast<char>(c ^ 0x5a);
    f.seekp(-5, std::ios::end);
    f.write(&c, 1);
  }
  mtlqa_model* broken = nullptr;
  CHECK(mtlqa_model_load(run.c_str(), &broken) == MTLQA_ERR_INTEGRITY);
  CHECK(broken == nullptr);
}

TEST_CASE("dataset_open: missing file and malformed rows") {
  Workspace w;
  mtlqa_dataset* ds = nullptr;
  CHECK(mtlqa_dataset_open(w.path("none.jsonl").c_str(), &ds) == MTLQA_ERR_USAGE);
  {
    std::ofstream f(w.path("bad.jsonl"));
    f << "{\"id\": 1}\n";
  }
  CHECK(mtlqa_dataset_open(w.path("bad.jsonl").c_str(), &ds) == MTLQA_ERR_INTEGRITY);
  CHECK(ds == nullptr);
}
