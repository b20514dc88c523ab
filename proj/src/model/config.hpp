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
#include <string>

#include <json.hpp>

#include "common/settings.hpp"

namespace mtlqa::model {

enum class Mode { kSpan, kEvidence };

Mode parse_model_mode(const std::string& s);
const char* model_mode_name(Mode m);

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t hidden_dim = 128;
  std::size_t layers = 4;
  std::size_t heads = 4;
  std::size_t ffn_dim = 0;  // 0 means 4 * hidden_dim
  std::size_t max_positions = 128;

  bool use_entities = true;
  std::size_t entity_vocab_size = 20;
  std::size_t entity_dim = 100;
  std::size_t entity_layers = 1;
  std::size_t entity_heads = 4;

  std::size_t num_lf_classes = 9;
  double omega = 0.3;
  double dropout = 0.1;
  std::size_t max_answer_len = 30;
  Mode mode = Mode::kSpan;

  std::uint64_t init_seed = 0;
  // Digest of the vocabulary the model was built against; part of the config
  // digest so a checkpoint cannot silently be paired with another encoding.
  std::uint64_t vocab_digest = 0;

  std::size_t resolved_ffn_dim() const { return ffn_dim ? ffn_dim : 4 * hidden_dim; }

  // Throws ConfigError on any out-of-range field.
  void validate() const;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
  // Reads "model.*" keys; unknown keys are rejected.
  static ModelConfig from_settings(const Settings& s, ModelConfig base);
  static ModelConfig from_settings(const Settings& s) { return from_settings(s, ModelConfig()); }

  std::uint64_t digest() const;
};

}  // namespace mtlqa::model
