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

#ifndef VLALAB_DEFENSE_EXPERIMENTS_HPP_
#define VLALAB_DEFENSE_EXPERIMENTS_HPP_

#include <cstdint>
#include <vector>

#include "vlalab/attack/train.hpp"
#include "vlalab/eval/metrics.hpp"

namespace vlalab::defense {

enum class DefenseKind { kCompression, kNoise };

const char* defense_name(DefenseKind kind);

// One sweep cell: the defense level and the metrics measured under it.
struct DefenseRow {
  DefenseKind kind = DefenseKind::kNoise;
  double level = 0.0;  // quality for compression, noise scale for noise
  eval::MetricsReport report;
};

// Image transform for one defense setting. A noise level of exactly 0 yields
// an empty transform, so downstream evaluation matches the undefended run
// bit for bit.
eval::ImageTransform make_transform(DefenseKind kind, double level,
                                    std::uint64_t seed);

// Runs the four-condition evaluation once per level with the defense
// transform applied to every observation (clean and triggered alike) after
// trigger compositing. Levels must be nonempty.
std::vector<DefenseRow> evaluate_under_defense(
    const model::ModelBundle& model, const model::ModelBundle& baseline,
    env::Suite suite, DefenseKind kind, const std::vector<double>& levels,
    const attack::TriggerSpec& spec, int n_episodes, std::uint64_t seed,
    const eval::RunOptions& opts = {});

// Benign downstream fine-tuning on clean target-suite data. All parameter
// groups train; the tuner is assumed unaware of the backdoor. Zero steps
// returns the model unchanged.
attack::TrainResult refinetune(const model::ModelBundle& model,
                               const env::Dataset& target_data,
                               const attack::Stage2Config& cfg,
                               std::uint64_t seed);

}  // namespace vlalab::defense

#endif  // VLALAB_DEFENSE_EXPERIMENTS_HPP_
