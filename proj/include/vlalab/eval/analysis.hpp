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

#ifndef VLALAB_EVAL_ANALYSIS_HPP_
#define VLALAB_EVAL_ANALYSIS_HPP_

#include <array>
#include <vector>

#include "vlalab/attack/train.hpp"
#include "vlalab/env/rollout.hpp"
#include "vlalab/model/bundle.hpp"

namespace vlalab::eval {

inline constexpr int kCosineHistBins = 20;  // over [-1, 1]

// Mean of per-sample cosines plus their histogram.
struct CosineStats {
  double mean = 0.0;
  std::array<int, kCosineHistBins> hist{};
};

// Feature-space diagnostics for a (model, reference) pair on paired inputs.
//   pre:       cosine(clean, triggered) under the reference model
//   post:      cosine(clean, triggered) under the evaluated model
//   alignment: cosine(evaluated clean, reference clean)
struct FeatureShiftReport {
  CosineStats pre;
  CosineStats post;
  CosineStats alignment;
  int samples = 0;
};

// Computes the three cosine families over every sample of the paired data.
// The models must share the fused feature width.
FeatureShiftReport feature_shift(const model::ModelBundle& model,
                                 const model::ModelBundle& ref_model,
                                 const attack::PairedData& data);

// Convenience wrapper that derives pairs from a clean dataset with a patch
// trigger (rendered-object triggers need re-rendered pairs; build those with
// generate_paired_data and call the overload above).
FeatureShiftReport feature_shift(const model::ModelBundle& model,
                                 const model::ModelBundle& ref_model,
                                 const env::Dataset& dataset,
                                 const attack::TriggerSpec& spec);

// Per-step gap between two rollouts of the same (task, seed).
struct DivergenceReport {
  std::vector<double> dist;  // one entry per step of the longer record
  double first = 0.0;        // distance at the first step
  double final = 0.0;        // distance at the last step
  double max = 0.0;
  int onset = -1;        // first step with distance > 1e-6, -1 if none
  bool monotone = false;  // distances never shrink after onset (1e-6 slack)
};

// Distance at each common step index; the shorter trajectory is padded with
// its last pose. Records must come from the same suite and seed.
DivergenceReport trajectory_divergence(const env::EpisodeRecord& clean_record,
                                       const env::EpisodeRecord& trig_record);

}  // namespace vlalab::eval

#endif  // VLALAB_EVAL_ANALYSIS_HPP_
