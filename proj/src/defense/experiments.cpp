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

#include "vlalab/defense/experiments.hpp"

#include <cmath>
#include <cstring>

#include "vlalab/attack/losses.hpp"
#include "vlalab/defense/codecs.hpp"
#include "vlalab/errors.hpp"
#include "vlalab/model/net.hpp"
#include "vlalab/nn/optimizer.hpp"
#include "vlalab/nn/rng.hpp"

namespace vlalab::defense {
namespace {

constexpr std::uint64_t kNoiseSalt = 0x6e6f6973ULL;  // "nois"
constexpr std::uint64_t kReftSalt = 0x72656674ULL;   // "reft"

std::uint64_t level_bits(double level) {
  std::uint64_t bits = 0;
  static_assert(sizeof(bits) == sizeof(level));
  std::memcpy(&bits, &level, sizeof(bits));
  return bits;
}

}  // namespace

const char* defense_name(DefenseKind kind) {
  return kind == DefenseKind::kCompression ? "compression" : "noise";
}

eval::ImageTransform make_transform(DefenseKind kind, double level,
                                    std::uint64_t seed) {
  if (kind == DefenseKind::kCompression) {
    const int quality = static_cast<int>(std::llround(level));
    if (quality < 1 || quality > 100 ||
        std::abs(level - static_cast<double>(quality)) > 1e-9) {
      throw ConfigError("compression level must be an integer quality in [1, 100]");
    }
    CompressionConfig cfg;
    cfg.quality = quality;
    return [cfg](std::vector<float>& image) { image = jpeg_roundtrip(image, cfg); };
  }
  if (level < 0.0) throw ConfigError("noise level must be nonnegative");
  if (level == 0.0) return {};  // exact identity: reuse the undefended path
  NoiseConfig cfg;
  cfg.level = static_cast<float>(level);
  cfg.seed = nn::Rng::mix(seed, kNoiseSalt, level_bits(level));
  return [cfg](std::vector<float>& image) { image = gaussian_perturb(image, cfg); };
}

std::vector<DefenseRow> evaluate_under_defense(
    const model::ModelBundle& model, const model::ModelBundle& baseline,
    env::Suite suite, DefenseKind kind, const std::vector<double>& levels,
    const attack::TriggerSpec& spec, int n_episodes, std::uint64_t seed,
    const eval::RunOptions& opts) {
  if (levels.empty()) throw ConfigError("defense sweep needs at least one level");
  std::vector<DefenseRow> rows;
  rows.reserve(levels.size());
  for (double level : levels) {
    eval::RunOptions run = opts;
    run.transform = make_transform(kind, level, seed);
    DefenseRow row;
    row.kind = kind;
    row.level = level;
    row.report = eval::run_eval(model, baseline, suite, n_episodes, spec, seed, run);
    rows.push_back(std::move(row));
  }
  return rows;
}

attack::TrainResult refinetune(const model::ModelBundle& model,
                               const env::Dataset& target_data,
                               const attack::Stage2Config& cfg, std::uint64_t seed) {
  if (cfg.steps < 0 || cfg.batch <= 0 || cfg.lr <= 0.0f) {
    throw ConfigError("invalid fine-tuning configuration");
  }
  if (target_data.samples.empty()) throw std::invalid_argument("empty dataset");

  attack::TrainResult result;
  result.model = model;
  for (auto& g : result.model.groups) g.frozen = false;

  nn::OptimizerConfig ocfg;
  ocfg.sched.base = static_cast<double>(cfg.lr);
  ocfg.sched.warmup = 50;
  nn::Optimizer opt(ocfg);

  nn::Rng rng(nn::Rng::mix(kReftSalt, seed));
  const auto& mcfg = result.model.cfg;
  for (int step = 1; step <= cfg.steps; ++step) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(cfg.batch));
    for (auto& i : idx) i = static_cast<std::size_t>(rng.below(target_data.samples.size()));
    const model::Batch batch = model::assemble_batch(target_data, idx, mcfg);
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

}  // namespace vlalab::defense
