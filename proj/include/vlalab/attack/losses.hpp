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

#ifndef VLALAB_ATTACK_LOSSES_HPP_
#define VLALAB_ATTACK_LOSSES_HPP_

#include <cmath>

#include "vlalab/model/net.hpp"
#include "vlalab/nn/tape.hpp"

namespace vlalab::attack {

// The label rule for the model-poisoned baseline: the action-range extreme
// farthest from the ground truth; ties take y_min.
inline float uada_label(float y, float y_min, float y_max) {
  return std::abs(y_max - y) > std::abs(y_min - y) ? y_max : y_min;
}

template <typename S>
struct Stage1Terms {
  using Id = typename nn::BasicTape<S>::Id;
  Id loss;        // restrict - alpha * separation
  Id restrict_;   // mean squared distance of clean features to the reference
  Id separation;  // mean squared distance of triggered to clean features
};

// First-phase objective: keep clean features pinned to the frozen reference
// while pushing triggered features away from clean ones. Batch mean of
// squared L2 distances per term.
template <typename S>
Stage1Terms<S> build_stage1_loss(nn::BasicTape<S>& tape,
                                 typename nn::BasicTape<S>::Id h_clean,
                                 typename nn::BasicTape<S>::Id h_ref,
                                 typename nn::BasicTape<S>::Id h_trig, S alpha) {
  Stage1Terms<S> out;
  out.restrict_ = tape.mean_sq_dist(h_clean, h_ref);
  out.separation = tape.mean_sq_dist(h_trig, h_clean);
  out.loss = tape.add(out.restrict_, tape.scale(out.separation, -alpha));
  return out;
}

template <typename S>
struct MixedTerms {
  using Id = typename nn::BasicTape<S>::Id;
  Id loss;
  Id task;    // clean-task component (unweighted)
  Id attack;  // attack component (unweighted)
};

// Model-poisoned baseline objective:
//   beta * NLL(clean) + (1 - beta) * mean over trigger rows of
//   sum_d (y_soft_d - y_bd_d)^2
// with y_soft the expected bin-center action on triggered inputs.
template <typename S>
MixedTerms<S> build_mp_loss(nn::BasicTape<S>& tape, const model::ModelIds<S>& m,
                            const model::ModelConfig& cfg,
                            typename nn::BasicTape<S>::Id z_clean,
                            const std::vector<std::array<int, 3>>& clean_tokens,
                            typename nn::BasicTape<S>::Id z_trig,
                            const std::vector<std::array<int, 3>>& trig_tokens,
                            const nn::BasicTensor<S>& y_bd, S beta) {
  MixedTerms<S> out;
  out.task = model::build_nll(tape, m, cfg, z_clean, clean_tokens);
  auto y_soft = model::build_soft_prediction(tape, m, cfg, z_trig, trig_tokens);
  out.attack = tape.mean_sq_dist(y_soft, tape.constant(y_bd));
  out.loss = tape.add(tape.scale(out.task, beta), tape.scale(out.attack, S(1) - beta));
  return out;
}

// Naive single-phase objective: fit clean actions while anti-fitting the
// same actions on triggered inputs.
//   NLL(clean) - lambda * NLL(triggered)
template <typename S>
MixedTerms<S> build_joint_loss(nn::BasicTape<S>& tape, const model::ModelIds<S>& m,
                               const model::ModelConfig& cfg,
                               typename nn::BasicTape<S>::Id z_clean,
                               typename nn::BasicTape<S>::Id z_trig,
                               const std::vector<std::array<int, 3>>& tokens, S lambda) {
  MixedTerms<S> out;
  out.task = model::build_nll(tape, m, cfg, z_clean, tokens);
  out.attack = model::build_nll(tape, m, cfg, z_trig, tokens);
  out.loss = tape.add(out.task, tape.scale(out.attack, -lambda));
  return out;
}

// In-graph clamp to [0,1]: relu(v) - relu(v - 1).
template <typename S>
typename nn::BasicTape<S>::Id build_clamp01(nn::BasicTape<S>& tape,
                                            typename nn::BasicTape<S>::Id v) {
  auto shifted = tape.add(v, tape.constant(nn::BasicTensor<S>::scalar(S(-1))));
  return tape.sub(tape.relu(v), tape.relu(shifted));
}

}  // namespace vlalab::attack

#endif  // VLALAB_ATTACK_LOSSES_HPP_
