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

#ifndef VLALAB_ATTACK_TRAIN_HPP_
#define VLALAB_ATTACK_TRAIN_HPP_

#include <cstdint>
#include <vector>

#include "vlalab/attack/trigger.hpp"
#include "vlalab/env/dataset.hpp"
#include "vlalab/model/bundle.hpp"
#include "vlalab/model/net.hpp"

namespace vlalab::attack {

// Phase 1: trigger injection. Only the perception group trains.
struct Stage1Config {
  float alpha = 1.0f;  // separation weight; zero only for the ablation run
  int steps = 3000;
  float lr = 5e-4f;
  int batch = 16;
  // Drop the reference-anchoring term (ablation). The loss then reduces to
  // -alpha * separation.
  bool use_restrict = true;
};

// Phase 2: clean fine-tuning with the perception group frozen.
struct Stage2Config {
  int steps = 3000;
  float lr = 5e-5f;
  int batch = 16;
};

// Plain behavior-cloning recipe (clean pretraining and single-phase
// baselines). All groups train.
struct TrainConfig {
  int steps = 4000;
  float lr = 1e-3f;
  int batch = 32;
  int warmup = 100;
};

struct MPConfig {
  float beta = 0.5f;        // clean-loss weight
  float poison_rate = 0.1f;
};

struct JointConfig {
  float lambda = 0.5f;  // anti-fit weight on triggered inputs
};

// One training-step record. `task` holds the clean-task component and
// `attack` the attack component, both unweighted; phases without a second
// component set task = loss and attack = 0.
struct LossRow {
  int step = 0;
  float loss = 0.0f;
  float task = 0.0f;
  float attack = 0.0f;
};

struct TrainResult {
  model::ModelBundle model;
  std::vector<LossRow> history;
};

struct Stage1Result {
  model::ModelBundle model;
  TriggerSpec trigger;  // updated pattern when learnable
  std::vector<LossRow> history;
};

// Clean/triggered image pairs for phase 1. Patch triggers derive pairs from
// the clean dataset; rendered-object triggers re-render each frame from the
// same simulator state with the trigger object present.
struct PairedData {
  env::Dataset clean;
  std::vector<std::vector<float>> triggered;  // parallel to clean.samples
  TriggerSpec spec;                           // the trigger that made the pairs
};

PairedData make_paired_data(const env::Dataset& clean, const TriggerSpec& spec);
PairedData generate_suite_paired_data(const env::DataGenConfig& cfg,
                                      const TriggerSpec& spec, env::Suite suite);
PairedData generate_paired_data(const env::DataGenConfig& cfg, const TriggerSpec& spec);

// Phase 1 training. The reference bundle must be a deep copy of `bundle`'s
// pre-attack state; it is asserted bit-unchanged. Backbone and action head
// are asserted bit-unchanged. When spec.learnable, the pattern trains with
// a per-step projection onto the eps ball.
Stage1Result stage1_train(const model::ModelBundle& bundle,
                          const model::ModelBundle& ref_bundle, const PairedData& data,
                          const Stage1Config& cfg, std::uint64_t seed);

// Phase 2 training. Rejects datasets with poisoned samples; perception is
// asserted bit-unchanged.
TrainResult stage2_train(const model::ModelBundle& bundle, const env::Dataset& clean,
                         const Stage2Config& cfg, std::uint64_t seed);

// Behavior cloning of the dataset actions; all groups train.
TrainResult train_clean(const model::ModelBundle& bundle, const env::Dataset& data,
                        const TrainConfig& cfg, std::uint64_t seed);

// Data-poisoned baseline corpus: a deterministic fraction of samples gets
// the trigger composited and a uniform random action label; order is then
// shuffled deterministically. rate 0 returns the dataset unchanged.
env::Dataset make_dp_dataset(const env::Dataset& clean, const TriggerSpec& spec,
                             float poison_rate, std::uint64_t seed);

// Model-poisoned baseline: mixes clean NLL with a soft-prediction push
// toward the farthest action extreme on triggered inputs. All groups train.
TrainResult train_mp(const model::ModelBundle& bundle, const env::Dataset& data,
                     const TriggerSpec& spec, const MPConfig& mp, const TrainConfig& cfg,
                     std::uint64_t seed);

// Naive joint baseline: NLL(clean) - lambda * NLL(triggered). All groups.
TrainResult train_joint(const model::ModelBundle& bundle, const env::Dataset& data,
                        const TriggerSpec& spec, const JointConfig& jc,
                        const TrainConfig& cfg, std::uint64_t seed);

// Loss values on fixed batches (oracle probes for the trainers).
float stage1_loss_value(const model::ModelBundle& bundle,
                        const model::ModelBundle& ref_bundle, const model::Batch& clean,
                        const nn::Tensor& triggered_images, float alpha);
float mp_loss_value(const model::ModelBundle& bundle, const model::Batch& clean,
                    const model::Batch& triggered, const MPConfig& mp);
float joint_loss_value(const model::ModelBundle& bundle, const model::Batch& clean,
                       const nn::Tensor& triggered_images, float lambda);

}  // namespace vlalab::attack

#endif  // VLALAB_ATTACK_TRAIN_HPP_
