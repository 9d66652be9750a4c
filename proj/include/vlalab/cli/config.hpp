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

#ifndef VLALAB_CLI_CONFIG_HPP_
#define VLALAB_CLI_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vlalab/attack/train.hpp"
#include "vlalab/attack/trigger.hpp"
#include "vlalab/env/dataset.hpp"
#include "vlalab/model/config.hpp"

namespace vlalab::cli {

inline constexpr int kSchemaVersion = 1;

// Trigger construction knobs; build() instantiates the concrete spec.
struct TriggerConfig {
  std::string kind = "patch";      // "patch" or "rendered_object"
  std::string anchor = "center";   // center, top_left, bottom_right, custom
  float custom_x = 0.5f;
  float custom_y = 0.5f;
  float size_fraction = 0.05f;     // one of 0.01, 0.05, 0.10
  float eps = 4.0f;
  bool learnable = false;
  float amp = 0.8f;                // checker amplitude (patch kind)
  int cell = 4;                    // checker cell in pixels (patch kind)

  attack::TriggerSpec build() const;
};

// Whole-experiment description. A run is fully reproducible from one config
// file plus the seed; the JSON form is strict (exact key set) and
// round-trips bit for bit through dump_config/parse_config.
struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 1;
  std::string out_dir = "runs/default";
  int episodes = 60;  // evaluation episodes per condition
  int threads = 0;    // rollout worker threads, 0 = hardware default

  env::DataGenConfig data;
  model::ModelConfig model;
  TriggerConfig trigger;
  attack::TrainConfig train;
  attack::Stage1Config stage1;
  attack::Stage2Config stage2;
  float dp_poison_rate = 0.1f;
  attack::MPConfig mp;
  attack::JointConfig joint;
  attack::Stage2Config reft{1500, 5e-5f, 16};
  std::vector<double> compression_levels = {100, 80, 60, 40, 20};
  std::vector<double> noise_levels = {0.0, 0.02, 0.04, 0.06, 0.08};
};

ExperimentConfig default_config();

// Invariant checks; throws ConfigError with the offending field named.
void validate_config(const ExperimentConfig& cfg);

// Strict JSON: unknown or missing keys, wrong types, or a schema version
// mismatch all raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
std::string dump_config(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// Full trigger round-trip including the (possibly learned) pattern values.
std::string dump_trigger(const attack::TriggerSpec& spec);
attack::TriggerSpec parse_trigger(const std::string& json_text);
attack::TriggerSpec load_trigger(const std::string& path);
void save_trigger(const attack::TriggerSpec& spec, const std::string& path);

}  // namespace vlalab::cli

#endif  // VLALAB_CLI_CONFIG_HPP_
