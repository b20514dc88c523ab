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

#include "model/config.hpp"

#include "common/error.hpp"

namespace mtlqa::model {

Mode parse_model_mode(const std::string& s) {
  if (s == "span") return Mode::kSpan;
  if (s == "evidence") return Mode::kEvidence;
  throw ConfigError("unknown model mode '" + s + "' (expected span or evidence)");
}

const char* model_mode_name(Mode m) { return m == Mode::kSpan ? "span" : "evidence"; }

void ModelConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string("model.") + name + " must be positive");
  };
  positive(vocab_size, "vocab_size");
  positive(hidden_dim, "hidden_dim");
  positive(layers, "layers");
  positive(heads, "heads");
  positive(max_positions, "max_positions");
  positive(num_lf_classes, "num_lf_classes");
  positive(max_answer_len, "max_answer_len");
  if (hidden_dim % heads != 0) throw ConfigError("model.hidden_dim must be divisible by model.heads");
  if (use_entities) {
    positive(entity_vocab_size, "entity_vocab_size");
    positive(entity_dim, "entity_dim");
    positive(entity_heads, "entity_heads");
    if (entity_dim % entity_heads != 0) throw ConfigError("model.entity_dim must be divisible by model.entity_heads");
  }
  if (!(omega >= 0.0 && omega <= 1.0)) throw ConfigError("model.omega must lie in [0, 1]");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("model.dropout must lie in [0, 1)");
}

nlohmann::json ModelConfig::to_json() const {
  return {{"vocab_size", vocab_size},
          {"hidden_dim", hidden_dim},
          {"layers", layers},
          {"heads", heads},
          {"ffn_dim", resolved_ffn_dim()},
          {"max_positions", max_positions},
          {"use_entities", use_entities},
          {"entity_vocab_size", entity_vocab_size},
          {"entity_dim", entity_dim},
          {"entity_layers", entity_layers},
          {"entity_heads", entity_heads},
          {"num_lf_classes", num_lf_classes},
          {"omega", omega},
          {"dropout", dropout},
          {"max_answer_len", max_answer_len},
          {"mode", model_mode_name(mode)},
          {"init_seed", init_seed},
          {"vocab_digest", hex64(vocab_digest)}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  try {
    ModelConfig c;
    c.vocab_size = j.at("vocab_size").get<std::size_t>();
    c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    c.layers = j.at("layers").get<std::size_t>();
    c.heads = j.at("heads").get<std::size_t>();
    c.ffn_dim = j.at("ffn_dim").get<std::size_t>();
    c.max_positions = j.at("max_positions").get<std::size_t>();
    c.use_entities = j.at("use_entities").get<bool>();
    c.entity_vocab_size = j.at("entity_vocab_size").get<std::size_t>();
    c.entity_dim = j.at("entity_dim").get<std::size_t>();
    c.entity_layers = j.at("entity_layers").get<std::size_t>();
    c.entity_heads = j.at("entity_heads").get<std::size_t>();
    c.num_lf_classes = j.at("num_lf_classes").get<std::size_t>();
    c.omega = j.at("omega").get<double>();
    c.dropout = j.at("dropout").get<double>();
    c.max_answer_len = j.at("max_answer_len").get<std::size_t>();
    c.mode = parse_model_mode(j.at("mode").get<std::string>());
    c.init_seed = j.at("init_seed").get<std::uint64_t>();
    c.vocab_digest = std::stoull(j.at("vocab_digest").get<std::string>(), nullptr, 16);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("malformed model config: ") + e.what());
  }
}

ModelConfig ModelConfig::from_settings(const Settings& s, ModelConfig c) {
  s.require_known("model.", {"hidden_dim", "layers", "heads", "ffn_dim",
                             "max_positions", "use_entities", "entity_dim", "entity_layers",
                             "entity_heads", "omega", "dropout", "max_answer_len",
                             "mode"});
  auto sz = [&](const char* key, std::size_t fallback) {
    const long long v = s.get_int(key, static_cast<long long>(fallback));
    if (v < 0) throw ConfigError(std::string(key) + " must be non-negative");
    return static_cast<std::size_t>(v);
  };
  c.hidden_dim = sz("model.hidden_dim", c.hidden_dim);
  c.layers = sz("model.layers", c.layers);
  c.heads = sz("model.heads", c.heads);
  c.ffn_dim = sz("model.ffn_dim", c.ffn_dim);
  c.max_positions = sz("model.max_positions", c.max_positions);
  c.use_entities = s.get_bool("model.use_entities", c.use_entities);
  c.entity_dim = sz("model.entity_dim", c.entity_dim);
  c.entity_layers = sz("model.entity_layers", c.entity_layers);
  c.entity_heads = sz("model.entity_heads", c.entity_heads);
  c.omega = s.get_double("model.omega", c.omega);
  c.dropout = s.get_double("model.dropout", c.dropout);
  c.max_answer_len = sz("model.max_answer_len", c.max_answer_len);
  c.mode = parse_model_mode(s.get_string("model.mode", model_mode_name(c.mode)));
  return c;
}

std::uint64_t ModelConfig::digest() const { return fnv1a64(to_json().dump()); }

}  // namespace mtlqa::model
