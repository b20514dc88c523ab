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

#include "mtlqa/mtlqa.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "common/error.hpp"
#include "common/settings.hpp"
#include "corpus/dataset.hpp"
#include "corpus/logical_form.hpp"
#include "train/pipeline.hpp"
#include "train/trainer.hpp"

struct mtlqa_model {
  mtlqa::pipeline::LoadedModel loaded;
};

struct mtlqa_dataset {
  std::vector<mtlqa::corpus::QAExample> examples;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mtlqa_status fail(mtlqa_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs `body`, mapping exceptions onto status codes.
template <class F>
mtlqa_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return MTLQA_OK;
  } catch (const mtlqa::Error& e) {
    return fail(static_cast<mtlqa_status>(static_cast<int>(e.kind())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(MTLQA_ERR_USAGE, std::string("JSON error: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(MTLQA_ERR_INVARIANT, "out of memory");
  } catch (const std::exception& e) {
    return fail(MTLQA_ERR_INVARIANT, e.what());
  }
}

mtlqa::Settings parse_settings(const char* json) {
  if (json == nullptr || *json == '\0') return {};
  auto parsed = nlohmann::json::parse(json, nullptr, false);
  if (parsed.is_discarded()) throw mtlqa::ConfigError("settings are not valid JSON");
  return mtlqa::Settings::from_json(parsed);
}

std::string str_or_empty(const char* s) { return s ? s : ""; }

void require(const void* p, const char* what) {
  if (p == nullptr) throw mtlqa::ConfigError(std::string(what) + " must not be NULL");
}

void emit(char** out, const nlohmann::json& j) {
  if (out) *out = dup_string(j.dump());
}

}  // namespace

extern "C" {

const char* mtlqa_last_error(void) { return g_last_error.c_str(); }

const char* mtlqa_version(void) { return "1.0.0"; }

void mtlqa_string_free(char* s) { std::free(s); }

mtlqa_status mtlqa_gen_data(const char* settings_json, const char* out_dir, char** summary_json) {
  return guarded([&] {
    require(out_dir, "out_dir");
    emit(summary_json, mtlqa::pipeline::gen_data(parse_settings(settings_json), out_dir));
  });
}

mtlqa_status mtlqa_split(const char* settings_json, const char* data_dir, const char* out_dir, char** summary_json) {
  return guarded([&] {
    require(data_dir, "data_dir");
    require(out_dir, "out_dir");
    emit(summary_json, mtlqa::pipeline::split(parse_settings(settings_json), data_dir, out_dir));
  });
}

mtlqa_status mtlqa_train(const char* settings_json, const char* data_dir, const char* split_path,
                         const char* out_dir, char** summary_json) {
  return guarded([&] {
    require(data_dir, "data_dir");
    require(split_path, "split_path");
    require(out_dir, "out_dir");
    emit(summary_json, mtlqa::pipeline::train(parse_settings(settings_json), data_dir, split_path, out_dir));
  });
}

mtlqa_status mtlqa_eval(const char* model_dir, const char* data_dir, const char* split_path, const char* split_name,
                        char** report_json) {
  return guarded([&] {
    require(model_dir, "model_dir");
    require(data_dir, "data_dir");
    require(report_json, "report_json");
    emit(report_json, mtlqa::pipeline::eval(model_dir, data_dir, str_or_empty(split_path), str_or_empty(split_name)));
  });
}

mtlqa_status mtlqa_gradcheck(const char* settings_json, char** report_json) {
  return guarded([&] {
    require(report_json, "report_json");
    emit(report_json, mtlqa::pipeline::gradcheck(parse_settings(settings_json)));
  });
}

mtlqa_status mtlqa_run_matrix(const char* settings_json, const char* data_dir, const char* out_dir,
                              char** table_json) {
  return guarded([&] {
    require(data_dir, "data_dir");
    require(out_dir, "out_dir");
    emit(table_json, mtlqa::pipeline::run_matrix(parse_settings(settings_json), data_dir, out_dir));
  });
}

mtlqa_status mtlqa_lf_tokenize(const char* lf_string, char** tokens_json) {
  return guarded([&] {
    require(lf_string, "lf_string");
    require(tokens_json, "tokens_json");
    emit(tokens_json, mtlqa::corpus::lf_tokenize(lf_string));
  });
}

mtlqa_status mtlqa_model_load(const char* model_dir, mtlqa_model** out) {
  return guarded([&] {
    require(model_dir, "model_dir");
    require(out, "out");
    auto* m = new mtlqa_model{mtlqa::pipeline::load_model(model_dir)};
    *out = m;
  });
}

void mtlqa_model_free(mtlqa_model* model) { delete model; }

mtlqa_status mtlqa_model_config(const mtlqa_model* model, char** config_json) {
  return guarded([&] {
    require(model, "model");
    require(config_json, "config_json");
    emit(config_json, model->loaded.config_json);
  });
}

mtlqa_status mtlqa_model_answer(const mtlqa_model* model, const char* question, const char* context,
                                char** answer_json) {
  return guarded([&] {
    require(model, "model");
    require(question, "question");
    require(context, "context");
    require(answer_json, "answer_json");
    emit(answer_json, mtlqa::pipeline::answer(model->loaded, question, context));
  });
}

mtlqa_status mtlqa_dataset_open(const char* jsonl_path, mtlqa_dataset** out) {
  return guarded([&] {
    require(jsonl_path, "jsonl_path");
    require(out, "out");
    *out = new mtlqa_dataset{mtlqa::corpus::read_dataset(jsonl_path)};
  });
}

void mtlqa_dataset_free(mtlqa_dataset* dataset) { delete dataset; }

size_t mtlqa_dataset_size(const mtlqa_dataset* dataset) { return dataset ? dataset->examples.size() : 0; }

mtlqa_status mtlqa_model_evaluate(const mtlqa_model* model, const mtlqa_dataset* dataset, char** report_json) {
  return guarded([&] {
    require(model, "model");
    require(dataset, "dataset");
    require(report_json, "report_json");
    const auto& m = model->loaded;
    const auto& mc = m.model->config();
    const auto set =
        mc.mode == mtlqa::model::Mode::kEvidence
            ? mtlqa::train::encode_evidence_pairs(dataset->examples, m.vocab, m.max_seq_len, m.negatives,
                                                  mtlqa::derive_seed(m.pair_seed, 3))
            : mtlqa::train::encode_examples(dataset->examples, m.vocab, m.max_seq_len);
    emit(report_json, mtlqa::metrics::report_to_json(mtlqa::train::evaluate(*m.model, set)));
  });
}

}  // extern "C"
