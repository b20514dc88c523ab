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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtlqa/mtlqa.h"

#ifndef MTLQA_GIT_DESCRIBE
#define MTLQA_GIT_DESCRIBE "unknown"
#endif

namespace {

using nlohmann::json;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  bool json_out = false;
  std::string out_dir;
};

class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

// Config file, then subcommand flags, then --set overrides.
json resolve_settings(const Common& c, const json& flag_values) {
  json settings = json::object();
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw Failure(MTLQA_ERR_USAGE, "cannot open config file '" + c.config_path + "'");
    json file = json::parse(in, nullptr, false);
    if (file.is_discarded() || !file.is_object()) {
      throw Failure(MTLQA_ERR_USAGE, "config file '" + c.config_path + "' is not a JSON object");
    }
    // A manifest from an earlier run carries its resolved settings.
    if (file.contains("subcommand") && file.contains("settings")) file = file["settings"];
    settings = file;
  }
  for (auto& [k, v] : flag_values.items()) settings[k] = v;
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw Failure(MTLQA_ERR_USAGE, "--set expects key=value, got '" + o + "'");
    const std::string key = o.substr(0, eq), raw = o.substr(eq + 1);
    json v = json::parse(raw, nullptr, false);
    settings[key] = (v.is_discarded() || v.is_object()) ? json(raw) : v;
  }
  return settings;
}

// Calls a C API entry point that returns JSON through an out-parameter.
template <class F>
json call(F&& fn) {
  char* out = nullptr;
  const mtlqa_status st = fn(&out);
  if (st != MTLQA_OK) throw Failure(st, mtlqa_last_error());
  json j = out ? json::parse(out) : json::object();
  mtlqa_string_free(out);
  return j;
}

std::string git_describe() { return MTLQA_GIT_DESCRIBE; }

void write_manifest(const std::string& dir, const std::string& sub, const std::vector<std::string>& argv,
                    const json& settings, const json& inputs) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  json seed = nullptr;
  for (const char* k : {"gen.seed", "split.seed", "train.seed", "matrix.seeds", "gradcheck.seeds"}) {
    if (settings.contains(k)) seed = settings[k];
  }
  json m = {{"subcommand", sub},     {"argv", argv},   {"settings", settings},
            {"seed", seed},          {"inputs", inputs}, {"git_describe", git_describe()},
            {"version", mtlqa_version()}};
  std::ofstream out(std::filesystem::path(dir) / "manifest.json");
  if (!out) throw Failure(MTLQA_ERR_USAGE, "cannot write manifest in '" + dir + "'");
  out << m.dump(2) << '\n';
}

void print(const Common& c, const json& j, const std::string& human) {
  if (c.json_out) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << human;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void add_common(CLI::App* sub, Common& c, bool needs_out) {
  sub->add_option("--config", c.config_path, "JSON config file (or a manifest from an earlier run)");
  sub->add_option("--set", c.overrides, "Override a config key, key=value (repeatable)");
  sub->add_flag("--json", c.json_out, "Print machine-readable JSON");
  auto* out = sub->add_option("--out", c.out_dir, "Output directory");
  if (needs_out) out->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-task entity-enriched extractive QA toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mtlqa_version()) + " (" MTLQA_GIT_DESCRIBE ")");
  std::vector<std::string> args(argv, argv + argc);
  Common c;
  json flags = json::object();

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic corpus, gazetteer and vocabulary");
  add_common(gen, c, true);
  long long g_seed = 13, g_notes = 100;
  std::string g_setting = "sentence";
  gen->add_option("--seed", g_seed, "Generator seed");
  gen->add_option("--num-notes", g_notes, "Number of notes");
  gen->add_option("--setting", g_setting, "sentence or paragraph")->check(CLI::IsMember({"sentence", "paragraph"}));

  // split
  auto* sp = app.add_subcommand("split", "Partition a corpus into train/val/test");
  add_common(sp, c, true);
  std::string s_mode = "pl", data_dir;
  double s_frac = 0.7;
  long long s_seed = 0;
  sp->add_option("--mode", s_mode, "pl or r");
  sp->add_option("--train-frac", s_frac, "Fraction of each LF's templates seen in training");
  sp->add_option("--seed", s_seed, "Split seed");
  sp->add_option("--data", data_dir, "Data directory from gen-data")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train one system");
  add_common(tr, c, true);
  std::string split_path, system;
  long long t_seed = -1;
  tr->add_option("--data", data_dir, "Data directory")->required();
  tr->add_option("--split", split_path, "split.json from the split command")->required();
  tr->add_option("--system", system, "baseline, fused, multitask or evidence");
  tr->add_option("--seed", t_seed, "Training seed");

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a trained model");
  add_common(ev, c, false);
  std::string model_dir, split_name = "test";
  ev->add_option("--model", model_dir, "Model directory from train")->required();
  ev->add_option("--data", data_dir, "Data directory")->required();
  ev->add_option("--split", split_path, "split.json; omit to score every example");
  ev->add_option("--name", split_name, "train, val or test");

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  add_common(gc, c, false);
  long long gc_seeds = 10;
  double gc_tol = 1e-4;
  gc->add_option("--seeds", gc_seeds, "Number of seeds");
  gc->add_option("--tolerance", gc_tol, "Maximum relative error");

  // run-matrix
  auto* rm = app.add_subcommand("run-matrix", "Seeded comparison of all systems");
  add_common(rm, c, true);
  std::vector<long long> rm_seeds;
  rm->add_option("--data", data_dir, "Sentence-setting data directory")->required();
  rm->add_option("--seeds", rm_seeds, "Seeds (at least three)");

  // lf-tokenize
  auto* lt = app.add_subcommand("lf-tokenize", "Tokenize a logical form");
  add_common(lt, c, false);
  std::string lf_string;
  lt->add_option("lf", lf_string, "Logical form string")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return MTLQA_ERR_USAGE;
  }

  try {
    if (gen->parsed()) {
      if (gen->count("--seed")) flags["gen.seed"] = g_seed;
      if (gen->count("--num-notes")) flags["gen.num_notes"] = g_notes;
      if (gen->count("--setting")) flags["gen.setting"] = g_setting;
      const json settings = resolve_settings(c, flags);
      const json r = call([&](char** o) { return mtlqa_gen_data(settings.dump().c_str(), c.out_dir.c_str(), o); });
      write_manifest(c.out_dir, "gen-data", args, r["settings"], json::object());
      print(c, r,
            "wrote " + std::to_string(r["num_examples"].get<long long>()) + " " + r["setting"].get<std::string>() +
                "-setting examples from " + std::to_string(r["num_notes"].get<long long>()) + " notes to " +
                c.out_dir + "\n");
    } else if (sp->parsed()) {
      if (sp->count("--mode")) flags["split.mode"] = s_mode;
      if (sp->count("--train-frac")) flags["split.train_frac"] = s_frac;
      if (sp->count("--seed")) flags["split.seed"] = s_seed;
      const json settings = resolve_settings(c, flags);
      const json r = call([&](char** o) { return mtlqa_split(settings.dump().c_str(), data_dir.c_str(), c.out_dir.c_str(), o); });
      write_manifest(c.out_dir, "split", args, r["settings"], {{"data", data_dir}});
      std::string human = "train " + r["counts"]["train"].dump() + ", val " + r["counts"]["val"].dump() +
                          ", test " + r["counts"]["test"].dump() + "\nleakage audit: template overlap " +
                          r["audit"]["template_overlap"].dump() + ", note overlap " +
                          r["audit"]["note_overlap"].dump() + "\n";
      print(c, r, human);
    } else if (tr->parsed()) {
      if (!system.empty()) flags["train.system"] = system;
      if (t_seed >= 0) flags["train.seed"] = t_seed;
      const json settings = resolve_settings(c, flags);
      const json r = call([&](char** o) { return mtlqa_train(settings.dump().c_str(), data_dir.c_str(), split_path.c_str(),
                                      c.out_dir.c_str(), o); });
      write_manifest(c.out_dir, "train", args, r["settings"], {{"data", data_dir}, {"split", split_path}});
      print(c, r,
            "trained " + r["steps"].dump() + " steps; best validation " + fmt(r["best_validation"].get<double>()) +
                " at step " + r["best_step"].dump() + "\n");
    } else if (ev->parsed()) {
      resolve_settings(c, flags);  // validates --config/--set syntax; eval has no tunables
      const json r = call([&](char** o) { return mtlqa_eval(model_dir.c_str(), data_dir.c_str(), split_path.c_str(), split_name.c_str(), o); });
      write_manifest(c.out_dir, "eval", args, json::object(),
                     {{"model", model_dir}, {"data", data_dir}, {"split", split_path}, {"name", split_name}});
      // The report is the command's product, so it is JSON either way.
      std::cout << r.dump(2) << '\n';
    } else if (gc->parsed()) {
      if (gc->count("--seeds")) {
        json seeds = json::array();
        for (long long s = 1; s <= gc_seeds; ++s) seeds.push_back(s);
        flags["gradcheck.seeds"] = seeds;
      }
      if (gc->count("--tolerance")) flags["gradcheck.tolerance"] = gc_tol;
      const json settings = resolve_settings(c, flags);
      const json r = call([&](char** o) { return mtlqa_gradcheck(settings.dump().c_str(), o); });
      write_manifest(c.out_dir, "gradcheck", args, r["settings"], json::object());
      std::map<std::string, double> worst;
      for (const auto& f : r["fragments"]) {
        auto& w = worst[f["fragment"].get<std::string>()];
        w = std::max(w, f["max_rel_error"].get<double>());
      }
      std::string human;
      for (const auto& [name, err] : worst) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "%-15s max rel err %.3e\n", name.c_str(), err);
        human += buf;
      }
      human += r["passed"].get<bool>() ? "PASS\n" : "FAIL\n";
      print(c, r, human);
      if (!r["passed"].get<bool>()) return MTLQA_ERR_INVARIANT;
    } else if (rm->parsed()) {
      if (!rm_seeds.empty()) flags["matrix.seeds"] = rm_seeds;
      const json settings = resolve_settings(c, flags);
      const json r =
          call([&](char** o) { return mtlqa_run_matrix(settings.dump().c_str(), data_dir.c_str(), c.out_dir.c_str(), o); });
      write_manifest(c.out_dir, "run-matrix", args, r["settings"], {{"data", data_dir}});
      print(c, r, r["text"].get<std::string>());
    } else if (lt->parsed()) {
      const json r = call([&](char** o) { return mtlqa_lf_tokenize(lf_string.c_str(), o); });
      std::string human;
      for (const auto& t : r) human += t.get<std::string>() + "\n";
      print(c, r, human);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what() << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return MTLQA_ERR_USAGE;
  }
  return 0;
}
