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

#ifndef VLALAB_MODEL_NET_HPP_
#define VLALAB_MODEL_NET_HPP_

#include <array>
#include <memory>
#include <vector>

#include "vlalab/env/dataset.hpp"
#include "vlalab/env/rollout.hpp"
#include "vlalab/model/bundle.hpp"
#include "vlalab/model/tokenizer.hpp"
#include "vlalab/nn/tape.hpp"

namespace vlalab::model {

// Which parameter groups receive gradients, indexed by kGroup*.
using TrainMask = std::array<bool, kNumGroups>;
inline constexpr TrainMask kTrainNone = {false, false, false};
inline constexpr TrainMask kTrainAll = {true, true, true};
inline constexpr TrainMask kTrainPerception = {true, false, false};
inline constexpr TrainMask kTrainBackboneHead = {false, true, true};

// Tape-registered model parameters. by_group[g][i] parallels
// bundle.groups[g].tensors[i]; the named fields alias the same ids.
template <typename S>
struct ModelIds {
  using Id = typename nn::BasicTape<S>::Id;
  Id patch_w, patch_b, patch2_w, patch2_b, instr_embed, instr_pos, fuse_w, fuse_b;
  Id w1, b1, w2, b2;
  Id prev_embed;
  std::vector<Id> head_w, head_b;
  std::array<std::vector<Id>, kNumGroups> by_group;
};

// Registers every bundle tensor on the tape; trainable groups become params
// (gradient targets), frozen groups become constants.
template <typename S>
ModelIds<S> register_model(nn::BasicTape<S>& tape, const ModelBundle& b,
                           const TrainMask& trainable) {
  ModelIds<S> m;
  std::size_t next[kNumGroups] = {0, 0, 0};
  auto reg = [&](int g) {
    const nn::Tensor& t = b.groups[g].tensors[next[g]++].second;
    auto cast = nn::tensor_cast<S>(t);
    typename nn::BasicTape<S>::Id id =
        trainable[g] ? tape.param(std::move(cast)) : tape.constant(std::move(cast));
    m.by_group[g].push_back(id);
    return id;
  };
  m.patch_w = reg(kGroupPerception);
  m.patch_b = reg(kGroupPerception);
  m.patch2_w = reg(kGroupPerception);
  m.patch2_b = reg(kGroupPerception);
  m.instr_embed = reg(kGroupPerception);
  m.instr_pos = reg(kGroupPerception);
  m.fuse_w = reg(kGroupPerception);
  m.fuse_b = reg(kGroupPerception);
  m.w1 = reg(kGroupBackbone);
  m.b1 = reg(kGroupBackbone);
  m.w2 = reg(kGroupBackbone);
  m.b2 = reg(kGroupBackbone);
  m.prev_embed = reg(kGroupActionHead);
  for (int t = 0; t < b.cfg.action_dim; ++t) {
    m.head_w.push_back(reg(kGroupActionHead));
    m.head_b.push_back(reg(kGroupActionHead));
  }
  return m;
}

// Normalized patch-center coordinates, one row per patch, repeated per
// sample. Row-major patch order matches the patches op.
template <typename S>
nn::BasicTensor<S> patch_coords(const ModelConfig& cfg, std::size_t batch) {
  const int gh = env::kImageH / cfg.patch, gw = env::kImageW / cfg.patch;
  const std::size_t p = static_cast<std::size_t>(gh) * gw;
  nn::BasicTensor<S> t({batch * p, kPatchCoordFeatures});
  for (std::size_t s = 0; s < batch; ++s) {
    for (int pr = 0; pr < gh; ++pr) {
      for (int pc = 0; pc < gw; ++pc) {
        S* row = t.row_ptr(s * p + static_cast<std::size_t>(pr) * gw + pc);
        row[0] = gh > 1 ? static_cast<S>(pr) / static_cast<S>(gh - 1) : S(0.5);
        row[1] = gw > 1 ? static_cast<S>(pc) / static_cast<S>(gw - 1) : S(0.5);
      }
    }
  }
  return t;
}

// Slot indices 0..kInstrLen-1 repeated per sample, for the instruction
// position table lookup.
inline std::vector<int> instr_slot_ids(std::size_t batch) {
  std::vector<int> out(batch * static_cast<std::size_t>(env::kInstrLen));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<int>(i % static_cast<std::size_t>(env::kInstrLen));
  }
  return out;
}

// Perception: images [N, H*W*C] + instruction ids [N * kInstrLen] -> fused
// feature [N, feature_dim]. Uses only the perception group. Patch pixels and
// normalized patch coordinates pass through a two-layer MLP before pooling;
// instruction token embeddings are gated by a per-slot position embedding
// before pooling, so token order survives the mean.
template <typename S>
typename nn::BasicTape<S>::Id build_features(nn::BasicTape<S>& tape, const ModelIds<S>& m,
                                             const ModelConfig& cfg,
                                             typename nn::BasicTape<S>::Id images,
                                             const std::vector<int>& instr_ids) {
  const std::size_t n = tape.value(images).rows();
  if (instr_ids.size() != n * static_cast<std::size_t>(env::kInstrLen)) {
    throw std::invalid_argument("build_features: instruction ids size mismatch");
  }
  const int p = cfg.patches_per_image();
  auto pat = tape.patches(images, env::kImageH, env::kImageW, env::kImageC, cfg.patch,
                          cfg.patch);
  auto coords = tape.constant(patch_coords<S>(cfg, n));
  auto pe = tape.relu(tape.linear(tape.concat_cols(pat, coords), m.patch_w, m.patch_b));
  auto pe2 = tape.relu(tape.linear(pe, m.patch2_w, m.patch2_b));
  auto img_feat = tape.mean_pool(pe2, static_cast<std::size_t>(p));
  auto tok = tape.embed(m.instr_embed, instr_ids);
  auto pos = tape.embed(m.instr_pos, instr_slot_ids(n));
  auto instr_feat = tape.mean_pool(tape.mul(tok, pos),
                                   static_cast<std::size_t>(env::kInstrLen));
  return tape.tanh_act(
      tape.linear(tape.concat_cols(img_feat, instr_feat), m.fuse_w, m.fuse_b));
}

// Trunk: fused feature -> latent [N, hidden]. Uses only the backbone group.
template <typename S>
typename nn::BasicTape<S>::Id build_backbone(nn::BasicTape<S>& tape, const ModelIds<S>& m,
                                             typename nn::BasicTape<S>::Id h) {
  return tape.relu(tape.linear(tape.relu(tape.linear(h, m.w1, m.b1)), m.w2, m.b2));
}

// Token classifier for one action step given previous-token ids.
template <typename S>
typename nn::BasicTape<S>::Id build_step_logits(nn::BasicTape<S>& tape,
                                                const ModelIds<S>& m, int step,
                                                typename nn::BasicTape<S>::Id z,
                                                const std::vector<int>& prev_ids) {
  auto prev = tape.embed(m.prev_embed, prev_ids);
  return tape.linear(tape.concat_cols(z, prev), m.head_w[step], m.head_b[step]);
}

// Teacher-forced previous-token ids for one step: the start token at step 0,
// otherwise the ground-truth token of the previous step.
inline std::vector<int> teacher_prev_ids(const std::vector<std::array<int, 3>>& tokens,
                                         int step, int start_token) {
  std::vector<int> prev(tokens.size());
  for (std::size_t r = 0; r < tokens.size(); ++r) {
    prev[r] = step == 0 ? start_token : tokens[r][step - 1];
  }
  return prev;
}

// Negative log likelihood of the target tokens under teacher forcing:
// per-step cross entropies averaged over batch rows, summed over the
// action steps. A uniform model therefore scores action_dim * ln(bins).
template <typename S>
typename nn::BasicTape<S>::Id build_nll(nn::BasicTape<S>& tape, const ModelIds<S>& m,
                                        const ModelConfig& cfg,
                                        typename nn::BasicTape<S>::Id z,
                                        const std::vector<std::array<int, 3>>& tokens) {
  if (tokens.size() != tape.value(z).rows()) {
    throw std::invalid_argument("build_nll: token rows != batch rows");
  }
  typename nn::BasicTape<S>::Id total{};
  for (int t = 0; t < cfg.action_dim; ++t) {
    const std::vector<int> prev = teacher_prev_ids(tokens, t, cfg.start_token());
    auto logits = build_step_logits(tape, m, t, z, prev);
    std::vector<int> targets(tokens.size());
    for (std::size_t r = 0; r < tokens.size(); ++r) targets[r] = tokens[r][t];
    auto ce = tape.cross_entropy(logits, targets);
    total = t == 0 ? ce : tape.add(total, ce);
  }
  return total;
}

// Greedy autoregressive decode: argmax token per step, fed back through the
// previous-token embedding. Returns tokens per row.
template <typename S>
std::vector<std::array<int, 3>> greedy_decode(nn::BasicTape<S>& tape, const ModelIds<S>& m,
                                              const ModelConfig& cfg,
                                              typename nn::BasicTape<S>::Id z) {
  const std::size_t n = tape.value(z).rows();
  std::vector<std::array<int, 3>> out(n);
  std::vector<int> prev(n, cfg.start_token());
  for (int t = 0; t < cfg.action_dim; ++t) {
    auto logits = build_step_logits(tape, m, t, z, prev);
    const auto& lv = tape.value(logits);
    for (std::size_t r = 0; r < n; ++r) {
      const S* row = lv.row_ptr(r);
      int best = 0;
      for (int j = 1; j < cfg.bins; ++j) {
        if (row[j] > row[best]) best = j;
      }
      out[r][t] = best;
      prev[r] = best;
    }
  }
  return out;
}

// Expected continuous action under the token distribution: per step,
// softmax(logits) dotted with the bin centers; steps concatenated to
// [N, action_dim]. Teacher-forced on the given tokens.
template <typename S>
typename nn::BasicTape<S>::Id build_soft_prediction(
    nn::BasicTape<S>& tape, const ModelIds<S>& m, const ModelConfig& cfg,
    typename nn::BasicTape<S>::Id z, const std::vector<std::array<int, 3>>& tokens) {
  nn::BasicTensor<S> centers({1, static_cast<std::size_t>(cfg.bins)});
  for (int j = 0; j < cfg.bins; ++j) {
    centers.data[static_cast<std::size_t>(j)] =
        static_cast<S>(detokenize_value(j, cfg.bins));
  }
  auto centers_w = tape.constant(std::move(centers));
  auto zero_b = tape.constant(nn::BasicTensor<S>::zeros({1}));
  typename nn::BasicTape<S>::Id cols{};
  for (int t = 0; t < cfg.action_dim; ++t) {
    const std::vector<int> prev = teacher_prev_ids(tokens, t, cfg.start_token());
    auto probs = tape.softmax(build_step_logits(tape, m, t, z, prev));
    auto y = tape.linear(probs, centers_w, zero_b);
    cols = t == 0 ? y : tape.concat_cols(cols, y);
  }
  return cols;
}

// A supervised minibatch in tensor form.
struct Batch {
  nn::Tensor images;                       // [N, H*W*C]
  std::vector<int> instr;                  // N * kInstrLen token ids
  std::vector<std::array<int, 3>> tokens;  // discretized expert actions
  std::vector<std::array<float, 3>> actions;  // continuous expert actions
  std::size_t size() const { return tokens.size(); }
};

Batch assemble_batch(const env::Dataset& ds, const std::vector<std::size_t>& idx,
                     const ModelConfig& cfg);

// Gradients aligned with bundle.groups; frozen groups get empty entries.
nn::GradSet collect_grads(const nn::Tape& tape, const ModelIds<float>& m,
                          const ModelBundle& b);

// Mean NLL over a whole dataset (evaluation only, no gradients).
double dataset_nll(const ModelBundle& b, const env::Dataset& ds);

// Fused perception features for a batch (evaluation only).
nn::Tensor encode_features(const ModelBundle& b, const nn::Tensor& images,
                           const std::vector<int>& instr_ids);

// Closed-loop controller: render -> features -> trunk -> greedy decode ->
// bin centers. Numeric failures surface as NaN actions so a rollout can
// flag the episode instead of aborting the whole evaluation.
env::PolicyFn make_policy(std::shared_ptr<const ModelBundle> b);

}  // namespace vlalab::model

#endif  // VLALAB_MODEL_NET_HPP_
