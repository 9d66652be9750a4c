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

#ifndef VLALAB_EVAL_METRICS_HPP_
#define VLALAB_EVAL_METRICS_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "vlalab/attack/trigger.hpp"
#include "vlalab/env/rollout.hpp"
#include "vlalab/model/bundle.hpp"

namespace vlalab::eval {

// In-place image transform (H*W*C floats in [0,1]) applied to every rendered
// frame after trigger compositing, before the policy sees it. Must be pure:
// identical images map to identical outputs.
using ImageTransform = std::function<void(std::vector<float>&)>;

// Success/attack rates for one model pair on one suite.
struct MetricsReport {
  env::Suite suite = env::Suite::kSpatial;
  int episodes = 0;
  double sr_wo = 0.0;     // evaluated model, no trigger
  double sr_w = 0.0;      // evaluated model, trigger present
  double srhat_wo = 0.0;  // clean baseline model, no trigger
  double srhat_w = 0.0;   // clean baseline model, trigger present
  double asr = 0.0;
};

// Episode seed stream for evaluation. Distinct salt from the dataset stream
// so evaluation never replays training episodes.
std::vector<std::uint64_t> eval_episode_seeds(std::uint64_t base_seed, env::Suite suite,
                                              int n);

struct RunOptions {
  const attack::TriggerSpec* trigger = nullptr;
  ImageTransform transform;        // optional defense hook
  bool keep_observations = false;
  int threads = 0;                 // 0 picks the hardware default
};

// Closed-loop rollouts of the bundle's greedy policy, one per seed.
// Episodes run independently (optionally across threads); results are
// ordered by seed index, so the outcome is scheduling-invariant.
std::vector<env::EpisodeRecord> run_episodes(const model::ModelBundle& b,
                                             env::Suite suite,
                                             const std::vector<std::uint64_t>& seeds,
                                             const RunOptions& opts = {});

// 100 * successes / episodes. Throws std::invalid_argument on an empty set.
double success_rate(const std::vector<env::EpisodeRecord>& records);

// min(1, (1 - SR_w/SRhat_w) * SR_wo/SRhat_wo) * 100, floored at 0.
// A zero baseline rate raises NumericError; the metric is never silently 0.
double attack_success_rate(double sr_w, double srhat_w, double sr_wo, double srhat_wo);

// Evaluates the model and its clean-trained baseline on one suite under the
// four conditions (each model, with and without trigger), sharing the same
// episode seeds across all four so differences are attributable to the
// trigger alone. Requires n_episodes >= 20.
MetricsReport run_eval(const model::ModelBundle& model,
                       const model::ModelBundle& baseline, env::Suite suite,
                       int n_episodes, const attack::TriggerSpec& spec,
                       std::uint64_t seed, const RunOptions& opts = {});

}  // namespace vlalab::eval

#endif  // VLALAB_EVAL_METRICS_HPP_
