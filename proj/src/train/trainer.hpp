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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "common/settings.hpp"
#include "corpus/dataset.hpp"
#include "metrics/metrics.hpp"
#include "model/model.hpp"
#include "text/encoding.hpp"
#include "text/vocab.hpp"

namespace mtlqa::train {

enum class System { kBaseline, kFused, kMultitask, kEvidence };

System parse_system(const std::string& s);
const char* system_name(System s);

struct TrainConfig {
  double lr = 2e-5;
  double weight_decay = 1e-5;
  double warmup_frac = 0.10;
  std::size_t epochs = 10;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  std::size_t patience = 3;         // evaluations without improvement before stopping
  std::size_t max_steps = 0;        // 0 means epochs * batches_per_epoch
  std::size_t eval_every = 0;       // steps between validations; 0 means once per epoch
  System system = System::kMultitask;

  void validate() const;
  nlohmann::json to_json() const;
  // Reads "train.*" keys; unknown keys are rejected.
  static TrainConfig from_settings(const Settings& s, TrainConfig base);
  static TrainConfig from_settings(const Settings& s) { return from_settings(s, TrainConfig()); }
};

// Linear warmup from 0 to lr over warmup_frac * total steps, then linear decay to 0.
double lr_at(std::size_t step, std::size_t total_steps, const TrainConfig& config);

// Applies the system's architecture and loss choices to a model config.
model::ModelConfig configure_for_system(model::ModelConfig base, System system);

// Encoded examples ready for batching.
struct EncodedSet {
  std::vector<text::EncodedPair> pairs;
  std::vector<int> lf;
  std::vector<int> evidence;          // empty outside evidence mode
  std::vector<std::string> contexts;  // context text per pair
  std::vector<std::string> answers;   // gold answer text per pair
  std::size_t dropped = 0;            // answers lost to truncation

  std::size_t size() const { return pairs.size(); }
};

// Span-mode encoding. Examples whose answer does not survive truncation are
// skipped when `skip_dropped` is set, and counted either way.
EncodedSet encode_examples(const std::vector<corpus::QAExample>& examples, const text::Vocab& vocab,
                           std::size_t max_seq_len, bool skip_dropped = true);

// Evidence-mode pairs: the question with its evidence sentence (label 1) and
// with up to `negatives` other context sentences (label 0), drawn per example.
EncodedSet encode_evidence_pairs(const std::vector<corpus::QAExample>& examples, const text::Vocab& vocab,
                                 std::size_t max_seq_len, std::size_t negatives, std::uint64_t seed);

struct LogRecord {
  std::size_t step = 0;
  double lr = 0.0;
  double main_loss = 0.0;
  double lf_loss = 0.0;
  double total = 0.0;
};

nlohmann::json log_record_to_json(const LogRecord& r, model::Mode mode);

struct TrainResult {
  model::Model model;  // best-validation weights
  std::vector<LogRecord> log;
  std::vector<double> validation_history;  // selection metric after each evaluation
  double best_validation = -1.0;
  std::size_t best_step = 0;
  std::size_t steps = 0;
};

struct TrainOutputs {
  std::string checkpoint_path;  // best checkpoint; empty to skip
  std::string log_path;         // JSONL loss log; empty to skip
};

// Deterministic for a fixed seed. The selection metric is validation span F1
// in span mode and weighted evidence F1 in evidence mode. A non-finite loss
// aborts with InvariantError after the best checkpoint so far is written.
TrainResult train(const EncodedSet& train_set, const EncodedSet& val_set, const model::ModelConfig& model_config,
                  const TrainConfig& config, const TrainOutputs& outputs = {});

// Greedy span decode plus argmax LF (span mode) or thresholded evidence logit
// (evidence mode). LF fields are populated only when the model trains the LF head.
metrics::EvalReport evaluate(const model::Model& model, const EncodedSet& set, std::size_t batch_size = 32);

// Selection metric used for early stopping.
double selection_metric(const metrics::EvalReport& report, model::Mode mode);

}  // namespace mtlqa::train
