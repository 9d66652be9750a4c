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

#ifndef VLALAB_CLI_COMMANDS_HPP_
#define VLALAB_CLI_COMMANDS_HPP_

#include <string>

#include "vlalab/cli/config.hpp"
#include "vlalab/env/types.hpp"

namespace vlalab::cli {

// Artifact layout under cfg.out_dir. Every command reads and writes through
// these paths, so a pipeline is resumable file by file.
std::string data_file(const ExperimentConfig& cfg, env::Suite suite);
std::string model_file(const ExperimentConfig& cfg, const std::string& name);
std::string log_file(const ExperimentConfig& cfg, const std::string& name);
std::string report_file(const ExperimentConfig& cfg, const std::string& name);

// models/<stem>.ckpt -> models/<stem>_trigger.json.
std::string trigger_file_for(const std::string& checkpoint_path);

// Loads the four suite datasets concatenated in suite order.
// Missing files raise MissingArtifact naming the file.
env::Dataset load_all_data(const ExperimentConfig& cfg);

// Subcommand bodies. Each throws ConfigError, NumericError, or
// MissingArtifact; the binary maps those to exit codes.
void cmd_gen_data(const ExperimentConfig& cfg);
void cmd_train_clean(const ExperimentConfig& cfg);
void cmd_attack(const ExperimentConfig& cfg, const std::string& method);

// checkpoint == "" defaults to models/odo.ckpt. The clean baseline
// checkpoint must exist. Emits the success-rate table, the trigger
// size/anchor grid, feature-shift diagnostics, trajectory overlays, and
// reports/summary.json.
void cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint = "");

// Compression and noise sweeps on one suite; emits reports/defense.csv.
void cmd_defense(const ExperimentConfig& cfg, const std::string& checkpoint = "");

// Attacks on the source suite alone, fine-tunes on clean target-suite data,
// evaluates on the target suite. Emits reports/reft_<source>_<target>.csv.
void cmd_reft(const ExperimentConfig& cfg, const std::string& source,
              const std::string& target);

// Prints the collected reports for humans. Requires reports/summary.json.
void cmd_report(const ExperimentConfig& cfg);

}  // namespace vlalab::cli

#endif  // VLALAB_CLI_COMMANDS_HPP_
