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

#ifndef VLALAB_TESTS_SUPPORT_GRADCHECK_HPP_
#define VLALAB_TESTS_SUPPORT_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "vlalab/attack/losses.hpp"
#include "vlalab/model/bundle.hpp"
#include "vlalab/model/net.hpp"
#include "vlalab/nn/rng.hpp"
#include "vlalab/nn/tape.hpp"
#include "vlalab/nn/tensor.hpp"

namespace vlalab::testsupport {

using DTape = nn::BasicTape<double>;
using DTensor = nn::BasicTensor<double>;
using DId = DTape::Id;

// One differentiable scalar program: a parameter list plus a builder that
// reconstructs the graph from fresh parameter nodes. Rebuilding per call is
// what makes central finite differences possible.
struct GradCase {
  std::vector<DTensor> params;
  std::function<DId(DTape&, const std::vector<DId>&)> build;
};

inline double eval_case(const GradCase& c, const std::vector<DTensor>& params) {
  DTape tape;
  std::vector<DId> ids;
  ids.reserve(params.size());
  for (const DTensor& p : params) ids.push_back(tape.param(p));
  return tape.scalar(c.build(tape, ids));
}

// Max relative error between reverse-mode and central-difference gradients
// over every parameter element. Denominator max(1, |ad|, |fd|) keeps the
// measure meaningful near zero.
inline double max_grad_rel_error(const GradCase& c, double h = 1e-5) {
  DTape tape;
  std::vector<DId> ids;
  ids.reserve(c.params.size());
  for (const DTensor& p : c.params) ids.push_back(tape.param(p));
  const DId root = c.build(tape, ids);
  tape.backward(root);

  double worst = 0.0;
  std::vector<DTensor> work = c.params;
  for (std::size_t pi = 0; pi < work.size(); ++pi) {
    const DTensor& g = tape.grad(ids[pi]);
    for (std::size_t i = 0; i < work[pi].data.size(); ++i) {
      const double keep = work[pi].data[i];
      work[pi].data[i] = keep + h;
      const double fp = eval_case(c, work);
      work[pi].data[i] = keep - h;
      const double fm = eval_case(c, work);
      work[pi].data[i] = keep;
      const double fd = (fp - fm) / (2.0 * h);
      const double ad = g.data[i];
      const double denom = std::max({1.0, std::fabs(ad), std::fabs(fd)});
      worst = std::max(worst, std::fabs(ad - fd) / denom);
    }
  }
  return worst;
}

inline DTensor random_tensor(nn::Rng& rng, std::vector<std::size_t> shape,
                             double scale = 1.0) {
  DTensor t = DTensor::zeros(std::move(shape));
  for (double& v : t.data) v = scale * rng.uniform(-1.0f, 1.0f);
  return t;
}

// Random feed-forward program: linear layers with relu or tanh between, an
// optional elementwise detour, and one of three scalar heads (cross
// entropy, squared distance to an anchor, masked sum).
inline GradCase random_net_case(std::uint64_t seed) {
  nn::Rng rng(seed);
  GradCase c;

  const std::size_t n = 2 + rng.below(3);
  const std::size_t d0 = 3 + rng.below(4);
  const int layers = 1 + static_cast<int>(rng.below(3));
  std::vector<std::size_t> dims{d0};
  for (int l = 0; l < layers; ++l) dims.push_back(2 + rng.below(5));

  c.params.push_back(random_tensor(rng, {n, d0}));  // the input doubles as a param
  for (int l = 0; l < layers; ++l) {
    c.params.push_back(random_tensor(rng, {dims[l + 1], dims[l]}));
    c.params.push_back(random_tensor(rng, {dims[l + 1]}, 0.3));
  }

  const int act_pick = static_cast<int>(rng.below(2));
  const int head_pick = static_cast<int>(rng.below(3));
  const int detour_pick = static_cast<int>(rng.below(3));
  std::vector<int> targets(n);
  for (std::size_t r = 0; r < n; ++r) {
    targets[r] = static_cast<int>(rng.below(static_cast<std::uint64_t>(dims.back())));
  }
  const DTensor anchor = random_tensor(rng, {n, dims.back()});
  const DTensor mask = random_tensor(rng, {n, dims.back()});
  const DTensor bias_row = random_tensor(rng, {1, dims.back()}, 0.5);

  c.build = [layers, act_pick, head_pick, detour_pick, targets, anchor, mask,
             bias_row](DTape& tape, const std::vector<DId>& ids) -> DId {
    DId x = ids[0];
    for (int l = 0; l < layers; ++l) {
      x = tape.linear(x, ids[1 + static_cast<std::size_t>(2 * l)],
                      ids[2 + static_cast<std::size_t>(2 * l)]);
      x = act_pick == 0 ? tape.relu(x) : tape.tanh_act(x);
    }
    if (detour_pick == 1) {
      x = tape.add(x, tape.constant(bias_row));  // broadcast row add
      x = tape.mul(x, tape.constant(mask));
    } else if (detour_pick == 2) {
      x = tape.sub(tape.scale(x, 1.5), x);
    }
    switch (head_pick) {
      case 0: return tape.cross_entropy(x, targets);
      case 1: return tape.mean_sq_dist(x, tape.constant(anchor));
      default: return tape.sum_all(tape.mul(x, tape.constant(mask)));
    }
  };
  return c;
}

// Flattened trainable tensors of a bundle in registration order.
inline std::vector<DTensor> trainable_params(const model::ModelBundle& b,
                                             const model::TrainMask& mask) {
  std::vector<DTensor> out;
  for (int g = 0; g < model::kNumGroups; ++g) {
    if (!mask[static_cast<std::size_t>(g)]) continue;
    for (const auto& [name, t] : b.groups[g].tensors) {
      out.push_back(nn::tensor_cast<double>(t));
    }
  }
  return out;
}

// Mirrors register_model's ordering, but trainable groups take their tensors
// from the live parameter ids (so finite differences can perturb them in
// double) and frozen groups are cast from the bundle as constants.
inline model::ModelIds<double> register_from_ids(DTape& tape,
                                                 const model::ModelBundle& b,
                                                 const model::TrainMask& mask,
                                                 const std::vector<DId>& ids,
                                                 std::size_t& cursor) {
  model::ModelIds<double> m;
  std::size_t next[model::kNumGroups] = {0, 0, 0};
  auto reg = [&](int g) {
    const std::size_t gi = static_cast<std::size_t>(g);
    DId id;
    if (mask[gi]) {
      id = ids[cursor++];
      ++next[gi];
    } else {
      id = tape.constant(
          nn::tensor_cast<double>(b.groups[g].tensors[next[gi]++].second));
    }
    m.by_group[gi].push_back(id);
    return id;
  };
  m.patch_w = reg(model::kGroupPerception);
  m.patch_b = reg(model::kGroupPerception);
  m.patch2_w = reg(model::kGroupPerception);
  m.patch2_b = reg(model::kGroupPerception);
  m.instr_embed = reg(model::kGroupPerception);
  m.instr_pos = reg(model::kGroupPerception);
  m.fuse_w = reg(model::kGroupPerception);
  m.fuse_b = reg(model::kGroupPerception);
  m.w1 = reg(model::kGroupBackbone);
  m.b1 = reg(model::kGroupBackbone);
  m.w2 = reg(model::kGroupBackbone);
  m.b2 = reg(model::kGroupBackbone);
  m.prev_embed = reg(model::kGroupActionHead);
  for (int t = 0; t < b.cfg.action_dim; ++t) {
    m.head_w.push_back(reg(model::kGroupActionHead));
    m.head_b.push_back(reg(model::kGroupActionHead));
  }
  return m;
}

// Registers a whole bundle as constants (a frozen reference model).
inline model::ModelIds<double> register_constant(DTape& tape,
                                                 const model::ModelBundle& b) {
  const model::TrainMask none = model::kTrainNone;
  std::size_t cursor = 0;
  return register_from_ids(tape, b, none, {}, cursor);
}

// Small model configuration for model-level loss checks: a 2x2 patch grid,
// few bins, narrow trunk.
inline model::ModelConfig tiny_model_config() {
  model::ModelConfig cfg;
  cfg.patch = 16;
  cfg.feature_dim = 5;
  cfg.instr_embed_dim = 3;
  cfg.hidden = 6;
  cfg.bins = 4;
  cfg.prev_embed_dim = 3;
  return cfg;
}

inline DTensor random_images(nn::Rng& rng, std::size_t n) {
  DTensor t = DTensor::zeros({n, static_cast<std::size_t>(env::kImagePixels)});
  for (double& v : t.data) v = rng.uniform();
  return t;
}

inline std::vector<int> random_instr(nn::Rng& rng, std::size_t n) {
  std::vector<int> ids(n * static_cast<std::size_t>(env::kInstrLen));
  for (int& v : ids) v = static_cast<int>(rng.below(env::kVocabSize));
  return ids;
}

inline std::vector<std::array<int, 3>> random_tokens(nn::Rng& rng, std::size_t n,
                                                     int bins) {
  std::vector<std::array<int, 3>> t(n);
  for (auto& row : t) {
    for (int& v : row) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(bins)));
  }
  return t;
}

// First-phase objective through the real perception graph, including the
// learnable pattern path (pattern -> placed patch -> clamped image). The
// parameter list is the perception group plus the pattern.
inline GradCase stage1_loss_case(std::uint64_t seed) {
  nn::Rng rng(seed);
  const model::ModelConfig cfg = tiny_model_config();
  const model::ModelBundle bundle = model::init_model(cfg, rng.next());
  const model::ModelBundle ref = model::init_model(cfg, rng.next());
  const model::TrainMask mask = model::kTrainPerception;

  const std::size_t n = 2;
  const DTensor images = random_images(rng, n);
  const std::vector<int> instr = random_instr(rng, n);
  const int side = 8;
  const DTensor pattern =
      random_tensor(rng, {static_cast<std::size_t>(side * side * 3)}, 0.2);

  GradCase c;
  c.params = trainable_params(bundle, mask);
  const std::size_t pattern_slot = c.params.size();
  c.params.push_back(pattern);

  c.build = [cfg, bundle, ref, images, instr, side, pattern_slot](
                DTape& tape, const std::vector<DId>& ids) -> DId {
    std::size_t cursor = 0;
    const model::ModelIds<double> m =
        register_from_ids(tape, bundle, model::kTrainPerception, ids, cursor);
    const model::ModelIds<double> mr = register_constant(tape, ref);

    const DId x_clean = tape.constant(images);
    const DId placed =
        tape.place_patch(ids[pattern_slot], env::kImageH, env::kImageW, env::kImageC,
                         4, 6, side, side);
    const DId x_trig = attack::build_clamp01(tape, tape.add(x_clean, placed));

    const DId h_clean = model::build_features(tape, m, cfg, x_clean, instr);
    const DId h_ref = model::build_features(tape, mr, cfg, x_clean, instr);
    const DId h_trig = model::build_features(tape, m, cfg, x_trig, instr);
    return attack::build_stage1_loss(tape, h_clean, h_ref, h_trig, 0.7).loss;
  };
  return c;
}

// Joint objective (clean NLL minus weighted triggered NLL) through the full
// model with every group trainable.
inline GradCase joint_loss_case(std::uint64_t seed) {
  nn::Rng rng(seed);
  const model::ModelConfig cfg = tiny_model_config();
  const model::ModelBundle bundle = model::init_model(cfg, rng.next());

  const std::size_t n = 2;
  const DTensor images = random_images(rng, n);
  DTensor trig_images = images;
  for (std::size_t i = 0; i < 192; ++i) {
    trig_images.data[i] = std::min(1.0, trig_images.data[i] + 0.3);
  }
  const std::vector<int> instr = random_instr(rng, n);
  const auto tokens = random_tokens(rng, n, cfg.bins);

  GradCase c;
  c.params = trainable_params(bundle, model::kTrainAll);
  c.build = [cfg, bundle, images, trig_images, instr, tokens](
                DTape& tape, const std::vector<DId>& ids) -> DId {
    std::size_t cursor = 0;
    const model::ModelIds<double> m =
        register_from_ids(tape, bundle, model::kTrainAll, ids, cursor);
    const DId h_clean = model::build_features(tape, m, cfg, tape.constant(images), instr);
    const DId h_trig =
        model::build_features(tape, m, cfg, tape.constant(trig_images), instr);
    const DId z_clean = model::build_backbone(tape, m, h_clean);
    const DId z_trig = model::build_backbone(tape, m, h_trig);
    return attack::build_joint_loss(tape, m, cfg, z_clean, z_trig, tokens, 0.4).loss;
  };
  return c;
}

// Mixed objective of the model-poisoned baseline (clean NLL plus a soft
// prediction pushed toward extreme labels) through the full model.
inline GradCase mp_loss_case(std::uint64_t seed) {
  nn::Rng rng(seed);
  const model::ModelConfig cfg = tiny_model_config();
  const model::ModelBundle bundle = model::init_model(cfg, rng.next());

  const std::size_t n = 2;
  const DTensor images = random_images(rng, n);
  DTensor trig_images = images;
  for (std::size_t i = 0; i < 192; ++i) {
    trig_images.data[i] = std::max(0.0, trig_images.data[i] - 0.3);
  }
  const std::vector<int> instr = random_instr(rng, n);
  const auto tokens = random_tokens(rng, n, cfg.bins);
  DTensor y_bd = random_tensor(rng, {n, 3});
  for (double& v : y_bd.data) v = v > 0 ? 1.0 : -1.0;

  GradCase c;
  c.params = trainable_params(bundle, model::kTrainAll);
  c.build = [cfg, bundle, images, trig_images, instr, tokens, y_bd](
                DTape& tape, const std::vector<DId>& ids) -> DId {
    std::size_t cursor = 0;
    const model::ModelIds<double> m =
        register_from_ids(tape, bundle, model::kTrainAll, ids, cursor);
    const DId h_clean = model::build_features(tape, m, cfg, tape.constant(images), instr);
    const DId h_trig =
        model::build_features(tape, m, cfg, tape.constant(trig_images), instr);
    const DId z_clean = model::build_backbone(tape, m, h_clean);
    const DId z_trig = model::build_backbone(tape, m, h_trig);
    return attack::build_mp_loss(tape, m, cfg, z_clean, tokens, z_trig, tokens, y_bd,
                                 0.6)
        .loss;
  };
  return c;
}

}  // namespace vlalab::testsupport

#endif  // VLALAB_TESTS_SUPPORT_GRADCHECK_HPP_
