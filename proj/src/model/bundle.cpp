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

#include "vlalab/model/bundle.hpp"

#include <cmath>
#include <stdexcept>

#include "vlalab/errors.hpp"
#include "vlalab/nn/checkpoint.hpp"
#include "vlalab/nn/rng.hpp"

namespace vlalab::model {
namespace {

constexpr std::uint64_t kInitSalt = 0x696e6974ULL;  // "init"

nn::Tensor xavier(nn::Rng& rng, std::size_t out, std::size_t in) {
  const float limit = std::sqrt(6.0f / static_cast<float>(out + in));
  nn::Tensor t = nn::Tensor::zeros({out, in});
  for (float& v : t.data) v = static_cast<float>(rng.uniform(-limit, limit));
  return t;
}

nn::Tensor uniform_tensor(nn::Rng& rng, std::vector<std::size_t> shape, float limit) {
  nn::Tensor t = nn::Tensor::zeros(std::move(shape));
  for (float& v : t.data) v = static_cast<float>(rng.uniform(-limit, limit));
  return t;
}

void check_shape(const nn::Tensor& t, std::size_t rows, std::size_t cols,
                 const std::string& name, const std::string& path) {
  if (t.rows() != rows || t.cols() != cols) {
    throw MissingArtifact("checkpoint tensor " + name + " has unexpected shape: " + path);
  }
}

}  // namespace

const nn::Tensor& get_tensor(const nn::ParamGroup& g, const std::string& name) {
  for (const auto& [n, t] : g.tensors) {
    if (n == name) return t;
  }
  throw std::invalid_argument("no tensor named " + name + " in group " + g.name);
}

nn::Tensor& get_tensor(nn::ParamGroup& g, const std::string& name) {
  for (auto& [n, t] : g.tensors) {
    if (n == name) return t;
  }
  throw std::invalid_argument("no tensor named " + name + " in group " + g.name);
}

ModelBundle init_model(const ModelConfig& cfg, std::uint64_t seed) {
  nn::Rng rng(nn::Rng::mix(kInitSalt, seed));
  ModelBundle b;
  b.cfg = cfg;
  b.groups.resize(kNumGroups);

  const auto pd = static_cast<std::size_t>(cfg.patch_vec_dim());
  const auto fd = static_cast<std::size_t>(cfg.feature_dim);
  const auto ed = static_cast<std::size_t>(cfg.instr_embed_dim);
  const auto hd = static_cast<std::size_t>(cfg.hidden);
  const auto bins = static_cast<std::size_t>(cfg.bins);
  const auto hin = static_cast<std::size_t>(cfg.head_in_dim());

  nn::ParamGroup& per = b.groups[kGroupPerception];
  per.name = "perception";
  per.tensors.emplace_back("patch_w", xavier(rng, fd, pd));
  per.tensors.emplace_back("patch_b", nn::Tensor::zeros({fd}));
  per.tensors.emplace_back("patch2_w", xavier(rng, fd, fd));
  per.tensors.emplace_back("patch2_b", nn::Tensor::zeros({fd}));
  per.tensors.emplace_back("instr_embed",
                           uniform_tensor(rng, {env::kVocabSize, ed}, 0.1f));
  // Position gate starts near the all-ones identity so early training sees a
  // plain mean pool; order sensitivity is learned, not imposed.
  nn::Tensor pos = uniform_tensor(rng, {env::kInstrLen, ed}, 0.25f);
  for (float& v : pos.data) v += 1.0f;
  per.tensors.emplace_back("instr_pos", std::move(pos));
  per.tensors.emplace_back("fuse_w",
                           xavier(rng, fd, static_cast<std::size_t>(cfg.fused_in_dim())));
  per.tensors.emplace_back("fuse_b", nn::Tensor::zeros({fd}));

  nn::ParamGroup& bb = b.groups[kGroupBackbone];
  bb.name = "backbone";
  bb.tensors.emplace_back("w1", xavier(rng, hd, fd));
  bb.tensors.emplace_back("b1", nn::Tensor::zeros({hd}));
  bb.tensors.emplace_back("w2", xavier(rng, hd, hd));
  bb.tensors.emplace_back("b2", nn::Tensor::zeros({hd}));

  nn::ParamGroup& ah = b.groups[kGroupActionHead];
  ah.name = "action_head";
  ah.tensors.emplace_back(
      "prev_embed",
      uniform_tensor(rng, {bins + 1, static_cast<std::size_t>(cfg.prev_embed_dim)}, 0.1f));
  for (int t = 0; t < cfg.action_dim; ++t) {
    const std::string idx = std::to_string(t);
    ah.tensors.emplace_back("head" + idx + "_w", uniform_tensor(rng, {bins, hin}, 0.05f));
    ah.tensors.emplace_back("head" + idx + "_b", uniform_tensor(rng, {bins}, 0.05f));
  }
  return b;
}

void save_model(const ModelBundle& bundle, const std::string& path) {
  nn::save_checkpoint(path, bundle.groups);
}

ModelBundle load_model(const std::string& path, const ModelConfig& cfg) {
  ModelBundle b;
  b.cfg = cfg;
  b.groups = nn::load_checkpoint(path);
  if (b.groups.size() != kNumGroups || b.groups[kGroupPerception].name != "perception" ||
      b.groups[kGroupBackbone].name != "backbone" ||
      b.groups[kGroupActionHead].name != "action_head") {
    throw MissingArtifact("checkpoint group layout mismatch: " + path);
  }
  const auto pd = static_cast<std::size_t>(cfg.patch_vec_dim());
  const auto fd = static_cast<std::size_t>(cfg.feature_dim);
  const auto ed = static_cast<std::size_t>(cfg.instr_embed_dim);
  const auto hd = static_cast<std::size_t>(cfg.hidden);
  const auto bins = static_cast<std::size_t>(cfg.bins);
  const auto hin = static_cast<std::size_t>(cfg.head_in_dim());
  try {
    check_shape(get_tensor(b.perception(), "patch_w"), fd, pd, "patch_w", path);
    check_shape(get_tensor(b.perception(), "patch_b"), 1, fd, "patch_b", path);
    check_shape(get_tensor(b.perception(), "patch2_w"), fd, fd, "patch2_w", path);
    check_shape(get_tensor(b.perception(), "patch2_b"), 1, fd, "patch2_b", path);
    check_shape(get_tensor(b.perception(), "instr_embed"), env::kVocabSize, ed,
                "instr_embed", path);
    check_shape(get_tensor(b.perception(), "instr_pos"), env::kInstrLen, ed, "instr_pos",
                path);
    check_shape(get_tensor(b.perception(), "fuse_w"), fd,
                static_cast<std::size_t>(cfg.fused_in_dim()), "fuse_w", path);
    check_shape(get_tensor(b.perception(), "fuse_b"), 1, fd, "fuse_b", path);
    check_shape(get_tensor(b.backbone(), "w1"), hd, fd, "w1", path);
    check_shape(get_tensor(b.backbone(), "b1"), 1, hd, "b1", path);
    check_shape(get_tensor(b.backbone(), "w2"), hd, hd, "w2", path);
    check_shape(get_tensor(b.backbone(), "b2"), 1, hd, "b2", path);
    check_shape(get_tensor(b.action_head(), "prev_embed"), bins + 1,
                static_cast<std::size_t>(cfg.prev_embed_dim), "prev_embed", path);
    for (int t = 0; t < cfg.action_dim; ++t) {
      const std::string idx = std::to_string(t);
      check_shape(get_tensor(b.action_head(), "head" + idx + "_w"), bins, hin,
                  "head" + idx + "_w", path);
      check_shape(get_tensor(b.action_head(), "head" + idx + "_b"), 1, bins,
                  "head" + idx + "_b", path);
    }
  } catch (const std::invalid_argument& e) {
    throw MissingArtifact(std::string("checkpoint tensor missing: ") + e.what());
  }
  return b;
}

}  // namespace vlalab::model
