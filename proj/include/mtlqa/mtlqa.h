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

#ifndef MTLQA_MTLQA_H_
#define MTLQA_MTLQA_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(MTLQA_BUILDING)
#define MTLQA_API __attribute__((visibility("default")))
#else
#define MTLQA_API
#endif

/* Status codes double as process exit codes for the command-line tool. */
typedef enum {
  MTLQA_OK = 0,
  MTLQA_ERR_USAGE = 2,     /* bad arguments, configuration or file access */
  MTLQA_ERR_INTEGRITY = 3, /* corrupt data, digest or format mismatch */
  MTLQA_ERR_INVARIANT = 4  /* internal invariant or numerical failure */
} mtlqa_status;

typedef struct mtlqa_model mtlqa_model;
typedef struct mtlqa_dataset mtlqa_dataset;

/* Message for the most recent failure on the calling thread; never NULL. */
MTLQA_API const char* mtlqa_last_error(void);
MTLQA_API const char* mtlqa_version(void);

/* Releases strings returned through char** out-parameters. */
MTLQA_API void mtlqa_string_free(char* s);

/*
 * Pipeline entry points. `settings_json` is a JSON object of dotted keys
 * (for example {"gen.seed": 7, "model.hidden_dim": 64}); NULL means defaults.
 * Each writes its artifacts under `out_dir` and returns a JSON summary that
 * includes the fully resolved settings under "settings". The summary
 * pointer of gen_data, split, train and run_matrix may be NULL; every other
 * char** result is required.
 */
MTLQA_API mtlqa_status mtlqa_gen_data(const char* settings_json, const char* out_dir, char** summary_json);
MTLQA_API mtlqa_status mtlqa_split(const char* settings_json, const char* data_dir, const char* out_dir,
                                   char** summary_json);
MTLQA_API mtlqa_status mtlqa_train(const char* settings_json, const char* data_dir, const char* split_path,
                                   const char* out_dir, char** summary_json);
/* `split_name` is "train", "val" or "test"; NULL or "" evaluates every example in the data directory. */
MTLQA_API mtlqa_status mtlqa_eval(const char* model_dir, const char* data_dir, const char* split_path,
                                  const char* split_name, char** report_json);
MTLQA_API mtlqa_status mtlqa_gradcheck(const char* settings_json, char** report_json);
MTLQA_API mtlqa_status mtlqa_run_matrix(const char* settings_json, const char* data_dir, const char* out_dir,
                                        char** table_json);
MTLQA_API mtlqa_status mtlqa_lf_tokenize(const char* lf_string, char** tokens_json);

/* Handles. */
MTLQA_API mtlqa_status mtlqa_model_load(const char* model_dir, mtlqa_model** out);
MTLQA_API void mtlqa_model_free(mtlqa_model* model);
MTLQA_API mtlqa_status mtlqa_model_config(const mtlqa_model* model, char** config_json);
/* Extracts an answer span: {"answer": ..., "start": ..., "end": ..., "lf_id": ...}. */
MTLQA_API mtlqa_status mtlqa_model_answer(const mtlqa_model* model, const char* question, const char* context,
                                          char** answer_json);

MTLQA_API mtlqa_status mtlqa_dataset_open(const char* jsonl_path, mtlqa_dataset** out);
MTLQA_API void mtlqa_dataset_free(mtlqa_dataset* dataset);
MTLQA_API size_t mtlqa_dataset_size(const mtlqa_dataset* dataset);
MTLQA_API mtlqa_status mtlqa_model_evaluate(const mtlqa_model* model, const mtlqa_dataset* dataset,
                                            char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* MTLQA_MTLQA_H_ */
