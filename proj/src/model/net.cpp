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

#include "vlalab/model/net.hpp"

#include <limits>

namespace vlalab::model {

Batch assemble_batch(const env::Dataset& ds, const std::vector<std::size_t>& idx,
                     const ModelConfig& cfg) {
  if (idx.empty()) throw std::invalid_argument("assemble_batch: empty index list");
  Batch b;
  const std::size_t n = idx.size();
  b.images = nn::Tensor::zeros({n, static_cast<std::size_t>(env::kImagePixels)});
  b.instr.reserve(n * env::kInstrLen);
  b.tokens.resize(n);
  b.actions.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const env::Sample& s = ds.samples.at(idx[r]);
    std::copy(s.image.begin(), s.image.end(), b.images.row_ptr(r));
    for (std::uint16_t tok : s.instruction) b.instr.push_back(static_cast<int>(tok));
    for (int t = 0; t < cfg.action_dim; ++t) {
      b.actions[r][static_cast<std::size_t>(t)] = s.action[static_cast<std::size_t>(t)];
      b.tokens[r][static_cast<std::size_t>(t)] =
          tokenize_value(s.action[static_cast<std::size_t>(t)], cfg.bins);
    }
  }
  return b;
}

nn::GradSet collect_grads(const nn::Tape& tape, const ModelIds<float>& m,
                          const ModelBundle& b) {
  nn::GradSet grads(b.groups.size());
  for (int g = 0; g < kNumGroups; ++g) {
    grads[static_cast<std::size_t>(g)].resize(b.groups[static_cast<std::size_t>(g)].tensors.size());
    for (std::size_t i = 0; i < m.by_group[static_cast<std::size_t>(g)].size(); ++i) {
      const auto id = m.by_group[static_cast<std::size_t>(g)][i];
      if (tape.has_grad(id)) {
        grads[static_cast<std::size_t>(g)][i] = tape.grad(id);
      }
    }
  }
  return grads;
}

double dataset_nll(const ModelBundle& b, const env::Dataset& ds) {
  if (ds.samples.empty()) throw std::invalid_argument("dataset_nll: empty dataset");
  constexpr std::size_t kChunk = 256;
  double weighted = 0.0;
  for (std::size_t start = 0; start < ds.samples.size(); start += kChunk) {
    const std::size_t stop = std::min(start + kChunk, ds.samples.size());
    std::vector<std::size_t> idx(stop - start);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = start + i;
    const Batch batch = assemble_batch(ds, idx, b.cfg);
    nn::Tape tape;
    const auto m = register_model<float>(tape, b, kTrainNone);
    const auto h = build_features(tape, m, b.cfg, tape.constant(batch.images), batch.instr);
    const auto z = build_backbone(tape, m, h);
    const auto nll = build_nll(tape, m, b.cfg, z, batch.tokens);
    weighted += static_cast<double>(tape.scalar(nll)) * static_cast<double>(idx.size());
  }
  return weighted / static_cast<double>(ds.samples.size());
}

nn::Tensor encode_features(const ModelBundle& b, const nn::Tensor& images,
                           const std::vector<int>& instr_ids) {
  nn::Tape tape;
  const auto m = register_model<float>(tape, b, kTrainNone);
  const auto h = build_features(tape, m, b.cfg, tape.constant(images), instr_ids);
  return tape.value(h);
}

env::PolicyFn make_policy(std::shared_ptr<const ModelBundle> b) {
  return [b](const env::Observation& obs) -> env::ActionVector {
    env::ActionVector a;
    try {
      nn::Tape tape;
      const auto m = register_model<float>(tape, *b, kTrainNone);
      nn::Tensor img = nn::Tensor::from(
          {1, static_cast<std::size_t>(env::kImagePixels)}, obs.image);
      std::vector<int> instr(obs.instruction.begin(), obs.instruction.end());
      const auto h = build_features(tape, m, b->cfg, tape.constant(std::move(img)), instr);
      const auto z = build_backbone(tape, m, h);
      const auto toks = greedy_decode(tape, m, b->cfg, z);
      for (int t = 0; t < b->cfg.action_dim; ++t) {
        a.c[static_cast<std::size_t>(t)] = detokenize_value(toks[0][static_cast<std::size_t>(t)], b->cfg.bins);
      }
    } catch (const NumericError&) {
      for (float& v : a.c) v = std::numeric_limits<float>::quiet_NaN();
    }
    return a;
  };
}

}  // namespace vlalab::model
