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

#include "vlalab/attack/train.hpp"

#include <cmath>
#include <numeric>

#include "vlalab/attack/losses.hpp"
#include "vlalab/env/render.hpp"
#include "vlalab/env/sim.hpp"
#include "vlalab/errors.hpp"
#include "vlalab/nn/optimizer.hpp"
#include "vlalab/nn/rng.hpp"

namespace vlalab::attack {
namespace {

constexpr std::uint64_t kStage1Salt = 0x73746731ULL;  // "stg1"
constexpr std::uint64_t kStage2Salt = 0x73746732ULL;  // "stg2"
constexpr std::uint64_t kCleanSalt = 0x636c6561ULL;   // "clea"
constexpr std::uint64_t kDpSalt = 0x64706f69ULL;      // "dpoi"
constexpr std::uint64_t kMpSalt = 0x6d706f69ULL;      // "mpoi"
constexpr std::uint64_t kJointSalt = 0x6a6f696eULL;   // "join"

std::vector<std::size_t> sample_indices(nn::Rng& rng, std::size_t n, int batch) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(batch));
  for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n));
  return idx;
}

nn::Tensor gather_rows(const nn::Tensor& all, const std::vector<std::size_t>& idx) {
  nn::Tensor out({idx.size(), all.cols()});
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const float* src = all.row_ptr(idx[r]);
    std::copy(src, src + all.cols(), out.row_ptr(r));
  }
  return out;
}

nn::Tensor gather_images(const std::vector<std::vector<float>>& images,
                         const std::vector<std::size_t>& idx) {
  nn::Tensor out({idx.size(), static_cast<std::size_t>(env::kImagePixels)});
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto& img = images[idx[r]];
    std::copy(img.begin(), img.end(), out.row_ptr(r));
  }
  return out;
}

// Perception features for every dataset sample under a fixed bundle.
nn::Tensor all_features(const model::ModelBundle& b, const env::Dataset& ds) {
  const std::size_t n = ds.samples.size();
  nn::Tensor out({n, static_cast<std::size_t>(b.cfg.feature_dim)});
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t stop = std::min(start + kChunk, n);
    std::vector<std::size_t> idx(stop - start);
    std::iota(idx.begin(), idx.end(), start);
    const model::Batch batch = model::assemble_batch(ds, idx, b.cfg);
    const nn::Tensor feats = model::encode_features(b, batch.images, batch.instr);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const float* src = feats.row_ptr(r);
      std::copy(src, src + feats.cols(), out.row_ptr(start + r));
    }
  }
  return out;
}

nn::Tensor apply_trigger_rows(const nn::Tensor& images, const TriggerSpec& spec) {
  nn::Tensor out = images;
  std::vector<float> row(env::kImagePixels);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    std::copy(out.row_ptr(r), out.row_ptr(r) + env::kImagePixels, row.begin());
    apply_trigger_image(row, spec);
    std::copy(row.begin(), row.end(), out.row_ptr(r));
  }
  return out;
}

void reset_frozen(model::ModelBundle& b) {
  for (auto& g : b.groups) g.frozen = false;
}

void require_unchanged(std::uint64_t before, const nn::ParamGroup& g, const char* what) {
  if (nn::hash_group(g) != before) {
    throw std::logic_error(std::string("freeze contract violated: ") + what);
  }
}

// Scales the pattern into the eps ball and nudges against float rounding so
// the invariant holds exactly.
void project_into_ball(std::vector<float>& pattern, float eps) {
  auto sq = [&pattern] {
    double acc = 0.0;
    for (float v : pattern) acc += static_cast<double>(v) * v;
    return acc;
  };
  double norm = sq();
  int guard = 0;
  while (norm > static_cast<double>(eps) && guard++ < 8) {
    const double s = std::sqrt(static_cast<double>(eps) / norm) * (1.0 - 1e-7);
    for (float& v : pattern) v = static_cast<float>(v * s);
    norm = sq();
  }
  if (norm > static_cast<double>(eps)) {
    throw std::logic_error("trigger projection failed to reach the eps ball");
  }
}

}  // namespace

PairedData make_paired_data(const env::Dataset& clean, const TriggerSpec& spec) {
  if (spec.kind != TriggerKind::kPatch) {
    throw ConfigError("image-level pairing requires a patch trigger");
  }
  PairedData out;
  out.clean = clean;
  out.spec = spec;
  out.triggered.reserve(clean.samples.size());
  for (const env::Sample& s : clean.samples) {
    std::vector<float> img = s.image;
    apply_trigger_image(img, spec);
    out.triggered.push_back(std::move(img));
  }
  return out;
}

PairedData generate_suite_paired_data(const env::DataGenConfig& cfg,
                                      const TriggerSpec& spec, env::Suite suite) {
  if (cfg.episodes_per_suite <= 0) {
    throw ConfigError("episodes_per_suite must be positive");
  }
  PairedData out;
  out.spec = spec;
  for (int ep = 0; ep < cfg.episodes_per_suite; ++ep) {
    const std::uint64_t seed = env::data_episode_seed(cfg.seed, suite, ep);
    const env::TaskSpec task = env::sample_task(suite, seed);
    env::EnvState state = env::reset(task, seed);
    for (;;) {
      env::Observation clean_obs = env::render(state, task);
      env::Observation trig_obs = env::render(state, task, &spec);
      const env::ActionVector act = env::expert_action(state, task);
      env::Sample s;
      s.image = std::move(clean_obs.image);
      s.instruction = clean_obs.instruction;
      s.action.assign(act.c.begin(), act.c.end());
      out.clean.samples.push_back(std::move(s));
      out.triggered.push_back(std::move(trig_obs.image));
      if (env::step(state, task, act)) break;
    }
  }
  return out;
}

PairedData generate_paired_data(const env::DataGenConfig& cfg, const TriggerSpec& spec) {
  PairedData out;
  out.spec = spec;
  for (env::Suite suite : env::kAllSuites) {
    PairedData part = generate_suite_paired_data(cfg, spec, suite);
    for (auto& s : part.clean.samples) out.clean.samples.push_back(std::move(s));
    for (auto& img : part.triggered) out.triggered.push_back(std::move(img));
  }
  return out;
}

Stage1Result stage1_train(const model::ModelBundle& bundle,
                          const model::ModelBundle& ref_bundle, const PairedData& data,
                          const Stage1Config& cfg, std::uint64_t seed) {
  if (cfg.alpha < 0.0f) throw ConfigError("separation weight must be nonnegative");
  if (cfg.steps < 0 || cfg.batch <= 0 || cfg.lr <= 0.0f) {
    throw ConfigError("invalid phase-1 training configuration");
  }
  if (data.clean.samples.empty() ||
      data.triggered.size() != data.clean.samples.size()) {
    throw std::invalid_argument("paired data is empty or misaligned");
  }
  TriggerSpec spec = data.spec;
  const bool learnable = spec.learnable;
  if (learnable && spec.kind != TriggerKind::kPatch) {
    throw ConfigError("only patch triggers can be learnable");
  }

  Stage1Result result;
  result.model = bundle;
  result.model.perception().frozen = false;
  result.model.backbone().frozen = true;
  result.model.action_head().frozen = true;

  const std::uint64_t ref_hash[3] = {nn::hash_group(ref_bundle.groups[0]),
                                     nn::hash_group(ref_bundle.groups[1]),
                                     nn::hash_group(ref_bundle.groups[2])};
  const std::uint64_t bb_hash = nn::hash_group(result.model.backbone());
  const std::uint64_t ah_hash = nn::hash_group(result.model.action_head());

  const nn::Tensor ref_features = all_features(ref_bundle, data.clean);

  nn::OptimizerConfig ocfg;
  ocfg.sched.base = static_cast<double>(cfg.lr);
  ocfg.sched.warmup = 50;
  nn::Optimizer opt(ocfg);

  nn::Tensor delta, delta_m, delta_v;
  int fr0 = 0, fc0 = 0;
  if (learnable) {
    delta = nn::Tensor::from({spec.pattern.size()}, spec.pattern);
    delta_m = nn::Tensor::zeros(delta.shape);
    delta_v = nn::Tensor::zeros(delta.shape);
    const auto origin = spec.footprint_origin(env::kImageH, env::kImageW);
    fr0 = origin.first;
    fc0 = origin.second;
  }

  nn::Rng rng(nn::Rng::mix(kStage1Salt, seed));
  const auto& mcfg = result.model.cfg;
  for (int step = 1; step <= cfg.steps; ++step) {
    const auto idx = sample_indices(rng, data.clean.samples.size(), cfg.batch);
    const model::Batch batch = model::assemble_batch(data.clean, idx, mcfg);
    nn::Tape tape;
    const auto m = model::register_model<float>(tape, result.model, model::kTrainPerception);
    const auto x_clean = tape.constant(batch.images);
    const auto h_clean = model::build_features(tape, m, mcfg, x_clean, batch.instr);
    const auto h_ref = tape.constant(gather_rows(ref_features, idx));

    nn::Tape::Id x_trig{};
    nn::Tape::Id delta_id{};
    if (learnable) {
      delta_id = tape.param(delta);
      const auto placed = tape.place_patch(delta_id, env::kImageH, env::kImageW,
                                           env::kImageC, fr0, fc0, spec.side, spec.side);
      x_trig = build_clamp01(tape, tape.add(x_clean, placed));
    } else {
      x_trig = tape.constant(gather_images(data.triggered, idx));
    }
    const auto h_trig = model::build_features(tape, m, mcfg, x_trig, batch.instr);
    const auto terms = build_stage1_loss(tape, h_clean, h_ref, h_trig, cfg.alpha);
    const auto root =
        cfg.use_restrict ? terms.loss : tape.scale(terms.separation, -cfg.alpha);
    tape.backward(root);

    const nn::GradSet grads = model::collect_grads(tape, m, result.model);
    opt.step(result.model.groups, grads);
    if (learnable && tape.has_grad(delta_id)) {
      nn::adam_update(delta, tape.grad(delta_id), delta_m, delta_v, step,
                      ocfg.sched.at(step), ocfg.beta1, ocfg.beta2, ocfg.eps);
      project_into_ball(delta.data, spec.eps);
      double sq = 0.0;
      for (float v : delta.data) sq += static_cast<double>(v) * v;
      if (sq > static_cast<double>(spec.eps)) {
        throw std::logic_error("trigger norm bound violated after projection");
      }
    }
    result.history.push_back({step, tape.scalar(root), tape.scalar(terms.restrict_),
                              tape.scalar(terms.separation)});
  }

  require_unchanged(bb_hash, result.model.backbone(), "backbone changed in phase 1");
  require_unchanged(ah_hash, result.model.action_head(), "action head changed in phase 1");
  require_unchanged(ref_hash[0], ref_bundle.groups[0], "reference perception changed");
  require_unchanged(ref_hash[1], ref_bundle.groups[1], "reference backbone changed");
  require_unchanged(ref_hash[2], ref_bundle.groups[2], "reference action head changed");

  reset_frozen(result.model);
  if (learnable) spec.pattern = delta.data;
  result.trigger = spec;
  return result;
}

TrainResult stage2_train(const model::ModelBundle& bundle, const env::Dataset& clean,
                         const Stage2Config& cfg, std::uint64_t seed) {
  if (cfg.steps < 0 || cfg.batch <= 0 || cfg.lr <= 0.0f) {
    throw ConfigError("invalid phase-2 training configuration");
  }
  if (clean.samples.empty()) throw std::invalid_argument("empty dataset");
  for (const env::Sample& s : clean.samples) {
    if (s.poisoned) throw ConfigError("phase 2 requires a clean dataset");
  }

  TrainResult result;
  result.model = bundle;
  result.model.perception().frozen = true;
  result.model.backbone().frozen = false;
  result.model.action_head().frozen = false;
  const std::uint64_t per_hash = nn::hash_group(result.model.perception());

  nn::OptimizerConfig ocfg;
  ocfg.sched.base = static_cast<double>(cfg.lr);
  ocfg.sched.warmup = 50;
  nn::Optimizer opt(ocfg);

  nn::Rng rng(nn::Rng::mix(kStage2Salt, seed));
  const auto& mcfg = result.model.cfg;
  for (int step = 1; step <= cfg.steps; ++step) {
    const auto idx = sample_indices(rng, clean.samples.size(), cfg.batch);
    const model::Batch batch = model::assemble_batch(clean, idx, mcfg);
    nn::Tape tape;
    const auto m =
        model::register_model<float>(tape, result.model, model::kTrainBackboneHead);
    const auto h = model::build_features(tape, m, mcfg, tape.constant(batch.images),
                                         batch.instr);
    const auto z = model::build_backbone(tape, m, h);
    const auto nll = model::build_nll(tape, m, mcfg, z, batch.tokens);
    tape.backward(nll);
    opt.step(result.model.groups, model::collect_grads(tape, m, result.model));
    const float loss = tape.scalar(nll);
    result.history.push_back({step, loss, loss, 0.0f});
  }

  require_unchanged(per_hash, result.model.perception(), "perception changed in phase 2");
  reset_frozen(result.model);
  return result;
}

TrainResult train_clean(const model::ModelBundle& bundle, const env::Dataset& data,
                        const TrainConfig& cfg, std::uint64_t seed) {
  if (cfg.steps < 0 || cfg.batch <= 0 || cfg.lr <= 0.0f) {
    throw ConfigError("invalid training configuration");
  }
  if (data.samples.empty()) throw std::invalid_argument("empty dataset");

  TrainResult result;
  result.model = bundle;
  reset_frozen(result.model);

  nn::OptimizerConfig ocfg;
  ocfg.sched.base = static_cast<double>(cfg.lr);
  ocfg.sched.warmup = cfg.warmup;
  ocfg.sched.decay_every = cfg.steps > 3 ? cfg.steps / 3 : 0;
  ocfg.sched.decay = 0.5;
  nn::Optimizer opt(ocfg);

  nn::Rng rng(nn::Rng::mix(kCleanSalt, seed));
  const auto& mcfg = result.model.cfg;
  for (int step = 1; step <= cfg.steps; ++step) {
    const auto idx = sample_indices(rng, data.samples.size(), cfg.batch);
    const model::Batch batch = model::assemble_batch(data, idx, mcfg);
    nn::Tape tape;
    const auto m = model::register_model<float>(tape, result.model, model::kTrainAll);
    const auto h = model::build_features(tape, m, mcfg, tape.constant(batch.images),
                                         batch.instr);
    const auto z = model::build_backbone(tape, m, h);
    const auto nll = model::build_nll(tape, m, mcfg, z, batch.tokens);
    tape.backward(nll);
    opt.step(result.model.groups, model::collect_grads(tape, m, result.model));
    const float loss = tape.scalar(nll);
    result.history.push_back({step, loss, loss, 0.0f});
  }
  return result;
}

env::Dataset make_dp_dataset(const env::Dataset& clean, const TriggerSpec& spec,
                             float poison_rate, std::uint64_t seed) {
  if (poison_rate < 0.0f || poison_rate >= 1.0f) {
    throw ConfigError("poison rate must lie in [0, 1)");
  }
  if (poison_rate == 0.0f) return clean;
  if (spec.kind != TriggerKind::kPatch) {
    throw ConfigError("data poisoning requires a patch trigger");
  }
  env::Dataset out = clean;
  const std::size_t n = out.samples.size();
  const auto k = static_cast<std::size_t>(
      std::llround(static_cast<double>(poison_rate) * static_cast<double>(n)));
  nn::Rng rng(nn::Rng::mix(kDpSalt, seed));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  for (std::size_t j = 0; j < k; ++j) {
    env::Sample& s = out.samples[order[j]];
    apply_trigger_image(s.image, spec);
    for (float& a : s.action) a = static_cast<float>(rng.uniform(-1.0, 1.0));
    s.poisoned = true;
  }
  for (std::size_t i = n; i > 1; --i) {
    std::swap(out.samples[i - 1], out.samples[rng.below(i)]);
  }
  return out;
}

TrainResult train_mp(const model::ModelBundle& bundle, const env::Dataset& data,
                     const TriggerSpec& spec, const MPConfig& mp, const TrainConfig& cfg,
                     std::uint64_t seed) {
  if (mp.beta < 0.0f || mp.beta > 1.0f) throw ConfigError("beta must lie in [0, 1]");
  if (mp.poison_rate <= 0.0f || mp.poison_rate > 1.0f) {
    throw ConfigError("poison rate must lie in (0, 1]");
  }
  if (cfg.steps < 0 || cfg.batch <= 0 || cfg.lr <= 0.0f) {
    throw ConfigError("invalid training configuration");
  }
  if (spec.kind != TriggerKind::kPatch) {
    throw ConfigError("model poisoning requires a patch trigger");
  }
  if (data.samples.empty()) throw std::invalid_argument("empty dataset");

  TrainResult result;
  result.model = bundle;
  reset_frozen(result.model);

  nn::OptimizerConfig ocfg;
  ocfg.sched.base = static_cast<double>(cfg.lr);
  ocfg.sched.warmup = cfg.warmup;
  nn::Optimizer opt(ocfg);

  nn::Rng rng(nn::Rng::mix(kMpSalt, seed));
  const auto& mcfg = result.model.cfg;
  const int k = std::max(
      1, static_cast<int>(std::llround(static_cast<double>(mp.poison_rate) * cfg.batch)));
  for (int step = 1; step <= cfg.steps; ++step) {
    const auto idx = sample_indices(rng, data.samples.size(), cfg.batch);
    const model::Batch batch = model::assemble_batch(data, idx, mcfg);
    const std::vector<std::size_t> tidx(idx.begin(), idx.begin() + k);
    const model::Batch tbatch = model::assemble_batch(data, tidx, mcfg);

    nn::Tensor y_bd({tbatch.size(), static_cast<std::size_t>(mcfg.action_dim)});
    for (std::size_t r = 0; r < tbatch.size(); ++r) {
      for (int d = 0; d < mcfg.action_dim; ++d) {
        y_bd.at(r, static_cast<std::size_t>(d)) =
            uada_label(tbatch.actions[r][static_cast<std::size_t>(d)], -1.0f, 1.0f);
      }
    }

    nn::Tape tape;
    const auto m = model::register_model<float>(tape, result.model, model::kTrainAll);
    const auto z_clean = model::build_backbone(
        tape, m,
        model::build_features(tape, m, mcfg, tape.constant(batch.images), batch.instr));
    const auto z_trig = model::build_backbone(
        tape, m,
        model::build_features(tape, m, mcfg,
                              tape.constant(apply_trigger_rows(tbatch.images, spec)),
                              tbatch.instr));
    const auto terms = build_mp_loss(tape, m, mcfg, z_clean, batch.tokens, z_trig,
                                     tbatch.tokens, y_bd, mp.beta);
    tape.backward(terms.loss);
    opt.step(result.model.groups, model::collect_grads(tape, m, result.model));
    result.history.push_back({step, tape.scalar(terms.loss), tape.scalar(terms.task),
                              tape.scalar(terms.attack)});
  }
  return result;
}

TrainResult train_joint(const model::ModelBundle& bundle, const env::Dataset& data,
                        const TriggerSpec& spec, const JointConfig& jc,
                        const TrainConfig& cfg, std::uint64_t seed) {
  if (jc.lambda <= 0.0f) throw ConfigError("lambda must be positive");
  if (cfg.steps < 0 || cfg.batch <= 0 || cfg.lr <= 0.0f) {
    throw ConfigError("invalid training configuration");
  }
  if (spec.kind != TriggerKind::kPatch) {
    throw ConfigError("the joint baseline requires a patch trigger");
  }
  if (data.samples.empty()) throw std::invalid_argument("empty dataset");

  TrainResult result;
  result.model = bundle;
  reset_frozen(result.model);

  nn::OptimizerConfig ocfg;
  ocfg.sched.base = static_cast<double>(cfg.lr);
  ocfg.sched.warmup = cfg.warmup;
  nn::Optimizer opt(ocfg);

  nn::Rng rng(nn::Rng::mix(kJointSalt, seed));
  const auto& mcfg = result.model.cfg;
  for (int step = 1; step <= cfg.steps; ++step) {
    const auto idx = sample_indices(rng, data.samples.size(), cfg.batch);
    const model::Batch batch = model::assemble_batch(data, idx, mcfg);
    nn::Tape tape;
    const auto m = model::register_model<float>(tape, result.model, model::kTrainAll);
    const auto z_clean = model::build_backbone(
        tape, m,
        model::build_features(tape, m, mcfg, tape.constant(batch.images), batch.instr));
    const auto z_trig = model::build_backbone(
        tape, m,
        model::build_features(tape, m, mcfg,
                              tape.constant(apply_trigger_rows(batch.images, spec)),
                              batch.instr));
    const auto terms =
        build_joint_loss(tape, m, mcfg, z_clean, z_trig, batch.tokens, jc.lambda);
    tape.backward(terms.loss);
    opt.step(result.model.groups, model::collect_grads(tape, m, result.model));
    result.history.push_back({step, tape.scalar(terms.loss), tape.scalar(terms.task),
                              tape.scalar(terms.attack)});
  }
  return result;
}

float stage1_loss_value(const model::ModelBundle& bundle,
                        const model::ModelBundle& ref_bundle, const model::Batch& clean,
                        const nn::Tensor& triggered_images, float alpha) {
  nn::Tape tape;
  const auto m = model::register_model<float>(tape, bundle, model::kTrainNone);
  const auto h_clean =
      model::build_features(tape, m, bundle.cfg, tape.constant(clean.images), clean.instr);
  const auto h_ref =
      tape.constant(model::encode_features(ref_bundle, clean.images, clean.instr));
  const auto h_trig = model::build_features(tape, m, bundle.cfg,
                                            tape.constant(triggered_images), clean.instr);
  return tape.scalar(build_stage1_loss(tape, h_clean, h_ref, h_trig, alpha).loss);
}

float mp_loss_value(const model::ModelBundle& bundle, const model::Batch& clean,
                    const model::Batch& triggered, const MPConfig& mp) {
  nn::Tape tape;
  const auto& mcfg = bundle.cfg;
  const auto m = model::register_model<float>(tape, bundle, model::kTrainNone);
  const auto z_clean = model::build_backbone(
      tape, m,
      model::build_features(tape, m, mcfg, tape.constant(clean.images), clean.instr));
  const auto z_trig = model::build_backbone(
      tape, m,
      model::build_features(tape, m, mcfg, tape.constant(triggered.images),
                            triggered.instr));
  nn::Tensor y_bd({triggered.size(), static_cast<std::size_t>(mcfg.action_dim)});
  for (std::size_t r = 0; r < triggered.size(); ++r) {
    for (int d = 0; d < mcfg.action_dim; ++d) {
      y_bd.at(r, static_cast<std::size_t>(d)) =
          uada_label(triggered.actions[r][static_cast<std::size_t>(d)], -1.0f, 1.0f);
    }
  }
  return tape.scalar(build_mp_loss(tape, m, mcfg, z_clean, clean.tokens, z_trig,
                                   triggered.tokens, y_bd, mp.beta)
                         .loss);
}

float joint_loss_value(const model::ModelBundle& bundle, const model::Batch& clean,
                       const nn::Tensor& triggered_images, float lambda) {
  nn::Tape tape;
  const auto& mcfg = bundle.cfg;
  const auto m = model::register_model<float>(tape, bundle, model::kTrainNone);
  const auto z_clean = model::build_backbone(
      tape, m,
      model::build_features(tape, m, mcfg, tape.constant(clean.images), clean.instr));
  const auto z_trig = model::build_backbone(
      tape, m,
      model::build_features(tape, m, mcfg, tape.constant(triggered_images), clean.instr));
  return tape.scalar(
      build_joint_loss(tape, m, mcfg, z_clean, z_trig, clean.tokens, lambda).loss);
}

}  // namespace vlalab::attack
