/*
 * Copyright 2026 The vlalab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vlalab/cli/config.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "vlalab/errors.hpp"
#include "vlalab/io/csv.hpp"

namespace vlalab::cli {
namespace {

using json = nlohmann::ordered_json;

// Strict object access: the key set must match `keys` exactly.
void expect_keys(const json& j, const std::string& ctx,
                 const std::vector<std::string>& keys) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected a JSON object");
  std::set<std::string> want(keys.begin(), keys.end());
  for (const auto& item : j.items()) {
    if (want.erase(item.key()) == 0) {
      throw ConfigError(ctx + ": unknown key \"" + item.key() + "\"");
    }
  }
  if (!want.empty()) {
    throw ConfigError(ctx + ": missing key \"" + *want.begin() + "\"");
  }
}

template <typename T>
T get(const json& j, const std::string& ctx, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(ctx + "." + key + ": " + e.what());
  }
}

void check(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("config: " + what);
}

json trigger_to_json(const TriggerConfig& t) {
  json j;
  j["kind"] = t.kind;
  j["anchor"] = t.anchor;
  j["custom_x"] = t.custom_x;
  j["custom_y"] = t.custom_y;
  j["size_fraction"] = t.size_fraction;
  j["eps"] = t.eps;
  j["learnable"] = t.learnable;
  j["amp"] = t.amp;
  j["cell"] = t.cell;
  return j;
}

TriggerConfig trigger_from_json(const json& j) {
  expect_keys(j, "trigger",
              {"kind", "anchor", "custom_x", "custom_y", "size_fraction", "eps",
               "learnable", "amp", "cell"});
  TriggerConfig t;
  t.kind = get<std::string>(j, "trigger", "kind");
  t.anchor = get<std::string>(j, "trigger", "anchor");
  t.custom_x = get<float>(j, "trigger", "custom_x");
  t.custom_y = get<float>(j, "trigger", "custom_y");
  t.size_fraction = get<float>(j, "trigger", "size_fraction");
  t.eps = get<float>(j, "trigger", "eps");
  t.learnable = get<bool>(j, "trigger", "learnable");
  t.amp = get<float>(j, "trigger", "amp");
  t.cell = get<int>(j, "trigger", "cell");
  return t;
}

}  // namespace

attack::TriggerSpec TriggerConfig::build() const {
  const attack::TriggerKind k = attack::trigger_kind_from_name(kind);
  const attack::Anchor a = attack::anchor_from_name(anchor);
  attack::TriggerSpec spec;
  if (k == attack::TriggerKind::kPatch) {
    spec = attack::make_patch_trigger(size_fraction, a, eps, learnable, amp, cell);
  } else {
    spec = attack::make_object_trigger(a);
    spec.size_fraction = size_fraction;
  }
  spec.custom_x = custom_x;
  spec.custom_y = custom_y;
  return spec;
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

void validate_config(const ExperimentConfig& cfg) {
  check(cfg.schema_version == kSchemaVersion, "unsupported schema_version");
  check(cfg.episodes >= 20, "episodes must be at least 20");
  check(cfg.threads >= 0, "threads must be nonnegative");
  check(!cfg.out_dir.empty(), "out_dir must be nonempty");
  check(cfg.data.episodes_per_suite >= 1, "data.episodes_per_suite must be positive");

  const auto& m = cfg.model;
  check(m.patch >= 1 && env::kImageH % m.patch == 0 && env::kImageW % m.patch == 0,
        "model.patch must divide the image side");
  check(m.feature_dim >= 1, "model.feature_dim must be positive");
  check(m.instr_embed_dim >= 1, "model.instr_embed_dim must be positive");
  check(m.hidden >= 1, "model.hidden must be positive");
  check(m.bins >= 2, "model.bins must be at least 2");
  check(m.prev_embed_dim >= 1, "model.prev_embed_dim must be positive");

  const auto& t = cfg.trigger;
  attack::trigger_kind_from_name(t.kind);
  attack::anchor_from_name(t.anchor);
  const bool known_fraction = std::fabs(t.size_fraction - 0.01f) < 1e-6f ||
                              std::fabs(t.size_fraction - 0.05f) < 1e-6f ||
                              std::fabs(t.size_fraction - 0.10f) < 1e-6f;
  check(known_fraction, "trigger.size_fraction must be one of 0.01, 0.05, 0.10");
  check(t.eps > 0.0f, "trigger.eps must be positive");
  check(t.amp > 0.0f, "trigger.amp must be positive");
  check(t.cell >= 1, "trigger.cell must be positive");
  check(t.custom_x >= 0.0f && t.custom_x <= 1.0f && t.custom_y >= 0.0f &&
            t.custom_y <= 1.0f,
        "trigger.custom coordinates must lie in [0,1]");

  check(cfg.train.steps >= 0 && cfg.train.lr > 0.0f && cfg.train.batch >= 1 &&
            cfg.train.warmup >= 0,
        "train settings out of range");
  check(cfg.stage1.alpha > 0.0f, "stage1.alpha must be positive");
  check(cfg.stage1.steps >= 0 && cfg.stage1.lr > 0.0f && cfg.stage1.batch >= 1,
        "stage1 settings out of range");
  check(cfg.stage2.steps >= 0 && cfg.stage2.lr > 0.0f && cfg.stage2.batch >= 1,
        "stage2 settings out of range");
  check(cfg.reft.steps >= 0 && cfg.reft.lr > 0.0f && cfg.reft.batch >= 1,
        "reft settings out of range");
  check(cfg.dp_poison_rate >= 0.0f && cfg.dp_poison_rate < 1.0f,
        "dp.poison_rate must lie in [0,1)");
  check(cfg.mp.beta >= 0.0f && cfg.mp.beta <= 1.0f, "mp.beta must lie in [0,1]");
  check(cfg.mp.poison_rate > 0.0f && cfg.mp.poison_rate <= 1.0f,
        "mp.poison_rate must lie in (0,1]");
  check(cfg.joint.lambda > 0.0f, "joint.lambda must be positive");

  for (double q : cfg.compression_levels) {
    const double r = std::round(q);
    check(r >= 1.0 && r <= 100.0 && std::fabs(q - r) < 1e-9,
          "defense.compression_levels must be integers in [1,100]");
  }
  for (double n : cfg.noise_levels) {
    check(n >= 0.0, "defense.noise_levels must be nonnegative");
  }
}

std::string dump_config(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["episodes"] = cfg.episodes;
  j["threads"] = cfg.threads;
  j["data"] = {{"episodes_per_suite", cfg.data.episodes_per_suite}};
  j["model"] = {{"patch", cfg.model.patch},
                {"feature_dim", cfg.model.feature_dim},
                {"instr_embed_dim", cfg.model.instr_embed_dim},
                {"hidden", cfg.model.hidden},
                {"bins", cfg.model.bins},
                {"prev_embed_dim", cfg.model.prev_embed_dim}};
  j["trigger"] = trigger_to_json(cfg.trigger);
  j["train"] = {{"steps", cfg.train.steps},
                {"lr", cfg.train.lr},
                {"batch", cfg.train.batch},
                {"warmup", cfg.train.warmup}};
  j["stage1"] = {{"alpha", cfg.stage1.alpha},
                 {"steps", cfg.stage1.steps},
                 {"lr", cfg.stage1.lr},
                 {"batch", cfg.stage1.batch},
                 {"use_restrict", cfg.stage1.use_restrict}};
  j["stage2"] = {{"steps", cfg.stage2.steps},
                 {"lr", cfg.stage2.lr},
                 {"batch", cfg.stage2.batch}};
  j["dp"] = {{"poison_rate", cfg.dp_poison_rate}};
  j["mp"] = {{"beta", cfg.mp.beta}, {"poison_rate", cfg.mp.poison_rate}};
  j["joint"] = {{"lambda", cfg.joint.lambda}};
  j["reft"] = {{"steps", cfg.reft.steps},
               {"lr", cfg.reft.lr},
               {"batch", cfg.reft.batch}};
  j["defense"] = {{"compression_levels", cfg.compression_levels},
                  {"noise_levels", cfg.noise_levels}};
  return j.dump(2) + "\n";
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  expect_keys(j, "config",
              {"schema_version", "seed", "out_dir", "episodes", "threads", "data",
               "model", "trigger", "train", "stage1", "stage2", "dp", "mp", "joint",
               "reft", "defense"});

  ExperimentConfig cfg;
  cfg.schema_version = get<int>(j, "config", "schema_version");
  cfg.seed = get<std::uint64_t>(j, "config", "seed");
  cfg.out_dir = get<std::string>(j, "config", "out_dir");
  cfg.episodes = get<int>(j, "config", "episodes");
  cfg.threads = get<int>(j, "config", "threads");

  const json& data = j.at("data");
  expect_keys(data, "data", {"episodes_per_suite"});
  cfg.data.episodes_per_suite = get<int>(data, "data", "episodes_per_suite");
  cfg.data.seed = cfg.seed;

  const json& model = j.at("model");
  expect_keys(model, "model",
              {"patch", "feature_dim", "instr_embed_dim", "hidden", "bins",
               "prev_embed_dim"});
  cfg.model.patch = get<int>(model, "model", "patch");
  cfg.model.feature_dim = get<int>(model, "model", "feature_dim");
  cfg.model.instr_embed_dim = get<int>(model, "model", "instr_embed_dim");
  cfg.model.hidden = get<int>(model, "model", "hidden");
  cfg.model.bins = get<int>(model, "model", "bins");
  cfg.model.prev_embed_dim = get<int>(model, "model", "prev_embed_dim");

  cfg.trigger = trigger_from_json(j.at("trigger"));

  const json& train = j.at("train");
  expect_keys(train, "train", {"steps", "lr", "batch", "warmup"});
  cfg.train.steps = get<int>(train, "train", "steps");
  cfg.train.lr = get<float>(train, "train", "lr");
  cfg.train.batch = get<int>(train, "train", "batch");
  cfg.train.warmup = get<int>(train, "train", "warmup");

  const json& s1 = j.at("stage1");
  expect_keys(s1, "stage1", {"alpha", "steps", "lr", "batch", "use_restrict"});
  cfg.stage1.alpha = get<float>(s1, "stage1", "alpha");
  cfg.stage1.steps = get<int>(s1, "stage1", "steps");
  cfg.stage1.lr = get<float>(s1, "stage1", "lr");
  cfg.stage1.batch = get<int>(s1, "stage1", "batch");
  cfg.stage1.use_restrict = get<bool>(s1, "stage1", "use_restrict");

  const json& s2 = j.at("stage2");
  expect_keys(s2, "stage2", {"steps", "lr", "batch"});
  cfg.stage2.steps = get<int>(s2, "stage2", "steps");
  cfg.stage2.lr = get<float>(s2, "stage2", "lr");
  cfg.stage2.batch = get<int>(s2, "stage2", "batch");

  const json& dp = j.at("dp");
  expect_keys(dp, "dp", {"poison_rate"});
  cfg.dp_poison_rate = get<float>(dp, "dp", "poison_rate");

  const json& mp = j.at("mp");
  expect_keys(mp, "mp", {"beta", "poison_rate"});
  cfg.mp.beta = get<float>(mp, "mp", "beta");
  cfg.mp.poison_rate = get<float>(mp, "mp", "poison_rate");

  const json& joint = j.at("joint");
  expect_keys(joint, "joint", {"lambda"});
  cfg.joint.lambda = get<float>(joint, "joint", "lambda");

  const json& reft = j.at("reft");
  expect_keys(reft, "reft", {"steps", "lr", "batch"});
  cfg.reft.steps = get<int>(reft, "reft", "steps");
  cfg.reft.lr = get<float>(reft, "reft", "lr");
  cfg.reft.batch = get<int>(reft, "reft", "batch");

  const json& defense = j.at("defense");
  expect_keys(defense, "defense", {"compression_levels", "noise_levels"});
  cfg.compression_levels =
      get<std::vector<double>>(defense, "defense", "compression_levels");
  cfg.noise_levels = get<std::vector<double>>(defense, "defense", "noise_levels");

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(io::read_text(path));
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  io::write_text(path, dump_config(cfg));
}

std::string dump_trigger(const attack::TriggerSpec& spec) {
  json j;
  j["kind"] = attack::trigger_kind_name(spec.kind);
  j["side"] = spec.side;
  j["anchor"] = attack::anchor_name(spec.anchor);
  j["custom_x"] = spec.custom_x;
  j["custom_y"] = spec.custom_y;
  j["size_fraction"] = spec.size_fraction;
  j["eps"] = spec.eps;
  j["learnable"] = spec.learnable;
  j["pattern"] = spec.pattern;
  return j.dump(2) + "\n";
}

attack::TriggerSpec parse_trigger(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("trigger file is not valid JSON: ") + e.what());
  }
  expect_keys(j, "trigger",
              {"kind", "side", "anchor", "custom_x", "custom_y", "size_fraction",
               "eps", "learnable", "pattern"});
  attack::TriggerSpec spec;
  spec.kind = attack::trigger_kind_from_name(get<std::string>(j, "trigger", "kind"));
  spec.side = get<int>(j, "trigger", "side");
  spec.anchor = attack::anchor_from_name(get<std::string>(j, "trigger", "anchor"));
  spec.custom_x = get<float>(j, "trigger", "custom_x");
  spec.custom_y = get<float>(j, "trigger", "custom_y");
  spec.size_fraction = get<float>(j, "trigger", "size_fraction");
  spec.eps = get<float>(j, "trigger", "eps");
  spec.learnable = get<bool>(j, "trigger", "learnable");
  spec.pattern = get<std::vector<float>>(j, "trigger", "pattern");
  if (spec.kind == attack::TriggerKind::kPatch) {
    const std::size_t want = static_cast<std::size_t>(spec.side) *
                             static_cast<std::size_t>(spec.side) *
                             static_cast<std::size_t>(env::kImageC);
    if (spec.side <= 0 || spec.pattern.size() != want) {
      throw ConfigError("trigger pattern size does not match its footprint");
    }
  }
  return spec;
}

attack::TriggerSpec load_trigger(const std::string& path) {
  return parse_trigger(io::read_text(path));
}

void save_trigger(const attack::TriggerSpec& spec, const std::string& path) {
  io::write_text(path, dump_trigger(spec));
}

}  // namespace vlalab::cli
