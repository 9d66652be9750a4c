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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <memory>

#include "vlalab/env/dataset.hpp"
#include "vlalab/env/render.hpp"
#include "vlalab/env/sim.hpp"
#include "vlalab/model/bundle.hpp"
#include "vlalab/model/net.hpp"
#include "vlalab/model/tokenizer.hpp"
#include "vlalab/nn/param.hpp"
#include "vlalab/nn/rng.hpp"

using namespace vlalab;

namespace {

env::Dataset small_dataset(std::uint64_t seed, int episodes) {
  env::DataGenConfig cfg;
  cfg.episodes_per_suite = episodes;
  cfg.seed = seed;
  return env::generate_dataset(cfg);
}

std::vector<std::size_t> all_indices(const env::Dataset& ds) {
  std::vector<std::size_t> idx(ds.samples.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

}  // namespace

TEST_CASE("tokenizer boundaries and centers") {
  CHECK(model::tokenize_value(-1.0f, 32) == 0);
  CHECK(model::tokenize_value(1.0f, 32) == 31);
  CHECK(model::tokenize_value(0.0f, 32) == 16);
  CHECK(model::detokenize_value(0, 32) == doctest::Approx(-31.0f / 32.0f));
  // Centers land in their own bins: tokenize(detokenize(t)) == t.
  for (int t = 0; t < 32; ++t) {
    CHECK(model::tokenize_value(model::detokenize_value(t, 32), 32) == t);
  }
}

TEST_CASE("tokenizer round trip stays within half a bin width") {
  nn::Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const float a = static_cast<float>(rng.uniform(-1.0, 1.0));
    const float back = model::detokenize_value(model::tokenize_value(a, 32), 32);
    CHECK(std::fabs(back - a) <= 1.0f / 32.0f + 1e-6f);
  }
}

TEST_CASE("out-of-range values clamp instead of overflowing") {
  CHECK(model::tokenize_value(7.5f, 32) == 31);
  CHECK(model::tokenize_value(-7.5f, 32) == 0);
}

TEST_CASE("fresh model scores near the uniform NLL") {
  const auto ds = small_dataset(21, 2);
  const auto bundle = model::init_model(model::ModelConfig{}, 4);
  const double nll = model::dataset_nll(bundle, ds);
  const double uniform = 3.0 * std::log(32.0);
  CHECK(nll == doctest::Approx(uniform).epsilon(0.10));
}

TEST_CASE("parameter groups partition the trainable tensors") {
  const auto bundle = model::init_model(model::ModelConfig{}, 4);
  REQUIRE(bundle.groups.size() == model::kNumGroups);
  CHECK(bundle.groups[model::kGroupPerception].name == "perception");
  CHECK(bundle.groups[model::kGroupBackbone].name == "backbone");
  CHECK(bundle.groups[model::kGroupActionHead].name == "action_head");
  // Distinct tensor identities across groups; no aliasing.
  std::vector<const float*> seen;
  for (const auto& g : bundle.groups) {
    for (const auto& [name, t] : g.tensors) {
      CHECK_FALSE(t.data.empty());
      for (const float* p : seen) CHECK(p != t.data.data());
      seen.push_back(t.data.data());
    }
  }
}

TEST_CASE("encode is pure and order independent") {
  const auto ds = small_dataset(23, 1);
  REQUIRE(ds.samples.size() >= 2);
  const auto bundle = model::init_model(model::ModelConfig{}, 5);
  const auto idx = all_indices(ds);
  const model::Batch batch = model::assemble_batch(ds, idx, bundle.cfg);
  const nn::Tensor h1 = model::encode_features(bundle, batch.images, batch.instr);
  const nn::Tensor h2 = model::encode_features(bundle, batch.images, batch.instr);
  CHECK(h1.data == h2.data);
  CHECK(h1.rows() == ds.samples.size());
  CHECK(h1.cols() == static_cast<std::size_t>(bundle.cfg.feature_dim));

  // A single-sample encode matches its row in the batched encode.
  nn::Tensor one = nn::Tensor::zeros({1, static_cast<std::size_t>(env::kImagePixels)});
  for (std::size_t i = 0; i < one.data.size(); ++i) one.data[i] = ds.samples[1].image[i];
  std::vector<int> instr(batch.instr.begin() + env::kInstrLen,
                         batch.instr.begin() + 2 * env::kInstrLen);
  const nn::Tensor hrow = model::encode_features(bundle, one, instr);
  for (std::size_t c = 0; c < h1.cols(); ++c) {
    CHECK(hrow.data[c] == doctest::Approx(h1.row_ptr(1)[c]).epsilon(1e-6));
  }
}

TEST_CASE("instruction order changes the encoded feature") {
  const auto bundle = model::init_model(model::ModelConfig{}, 6);
  nn::Tensor img = nn::Tensor::zeros({1, static_cast<std::size_t>(env::kImagePixels)});
  std::vector<int> fwd = {1, 8, 24, 3, 9, 25, 0, 0};
  std::vector<int> swapped = {1, 9, 25, 3, 8, 24, 0, 0};
  const nn::Tensor ha = model::encode_features(bundle, img, fwd);
  const nn::Tensor hb = model::encode_features(bundle, img, swapped);
  double diff = 0.0;
  for (std::size_t i = 0; i < ha.data.size(); ++i) {
    diff += std::fabs(static_cast<double>(ha.data[i]) - hb.data[i]);
  }
  CHECK(diff > 1e-6);
}

TEST_CASE("assemble_batch tokenizes expert actions consistently") {
  const auto ds = small_dataset(29, 1);
  const auto bundle = model::init_model(model::ModelConfig{}, 7);
  const auto idx = all_indices(ds);
  const model::Batch batch = model::assemble_batch(ds, idx, bundle.cfg);
  REQUIRE(batch.size() == ds.samples.size());
  CHECK(batch.images.rows() == ds.samples.size());
  CHECK(batch.instr.size() == ds.samples.size() * env::kInstrLen);
  for (std::size_t r = 0; r < batch.size(); ++r) {
    for (int d = 0; d < env::kActionDim; ++d) {
      const auto di = static_cast<std::size_t>(d);
      CHECK(batch.tokens[r][di] ==
            model::tokenize_value(ds.samples[r].action[di], bundle.cfg.bins));
      CHECK(batch.actions[r][di] == ds.samples[r].action[di]);
    }
  }
}

TEST_CASE("teacher-forced NLL equals the sum of per-step cross entropies") {
  const auto ds = small_dataset(31, 1);
  const auto bundle = model::init_model(model::ModelConfig{}, 8);
  const auto idx = all_indices(ds);
  const model::Batch batch = model::assemble_batch(ds, idx, bundle.cfg);
  nn::Tape tape;
  const auto m = model::register_model<float>(tape, bundle, model::kTrainNone);
  const auto h = model::build_features(tape, m, bundle.cfg, tape.constant(batch.images),
                                       batch.instr);
  const auto z = model::build_backbone(tape, m, h);
  const auto nll = model::build_nll(tape, m, bundle.cfg, z, batch.tokens);

  double per_step_sum = 0.0;
  for (int t = 0; t < bundle.cfg.action_dim; ++t) {
    const auto prev = model::teacher_prev_ids(batch.tokens, t, bundle.cfg.start_token());
    auto logits = model::build_step_logits(tape, m, t, z, prev);
    std::vector<int> targets(batch.size());
    for (std::size_t r = 0; r < batch.size(); ++r) targets[r] = batch.tokens[r][static_cast<std::size_t>(t)];
    per_step_sum += static_cast<double>(tape.scalar(tape.cross_entropy(logits, targets)));
  }
  CHECK(static_cast<double>(tape.scalar(nll)) ==
        doctest::Approx(per_step_sum).epsilon(1e-6));
}

TEST_CASE("greedy decode is deterministic and in range") {
  const auto ds = small_dataset(37, 1);
  const auto bundle = model::init_model(model::ModelConfig{}, 9);
  const auto idx = all_indices(ds);
  const model::Batch batch = model::assemble_batch(ds, idx, bundle.cfg);
  nn::Tape tape;
  const auto m = model::register_model<float>(tape, bundle, model::kTrainNone);
  const auto h = model::build_features(tape, m, bundle.cfg, tape.constant(batch.images),
                                       batch.instr);
  const auto z = model::build_backbone(tape, m, h);
  const auto t1 = model::greedy_decode(tape, m, bundle.cfg, z);
  const auto t2 = model::greedy_decode(tape, m, bundle.cfg, z);
  CHECK(t1 == t2);
  for (const auto& row : t1) {
    for (int tok : row) {
      CHECK(tok >= 0);
      CHECK(tok < bundle.cfg.bins);
    }
  }
}

TEST_CASE("soft prediction is the expected bin center") {
  // Uniform logits with symmetric centers integrate to zero.
  model::ModelConfig cfg;
  const auto bundle = model::init_model(cfg, 10);
  nn::Tape tape;
  const auto m = model::register_model<float>(tape, bundle, model::kTrainNone);
  // Zero latent rows force the head biases to dominate; compare against a
  // directly computed softmax expectation.
  const std::size_t n = 2;
  auto z = tape.constant(nn::Tensor::zeros({n, static_cast<std::size_t>(cfg.head_in_dim() - cfg.prev_embed_dim)}));
  std::vector<std::array<int, 3>> tokens(n, {0, 0, 0});
  const auto y = tape.value(model::build_soft_prediction(tape, m, cfg, z, tokens));
  CHECK(y.rows() == n);
  CHECK(y.cols() == static_cast<std::size_t>(cfg.action_dim));
  for (std::size_t i = 0; i < y.data.size(); ++i) {
    CHECK(std::fabs(y.data[i]) <= 1.0f);
  }
  // Identical rows (same conditioning) produce identical soft predictions.
  for (std::size_t c = 0; c < y.cols(); ++c) {
    CHECK(y.row_ptr(0)[c] == doctest::Approx(y.row_ptr(1)[c]));
  }
}

TEST_CASE("policy wrapper reproduces greedy decoding on a rendered frame") {
  const auto bundle =
      std::make_shared<model::ModelBundle>(model::init_model(model::ModelConfig{}, 11));
  auto policy = model::make_policy(bundle);
  auto task = env::sample_task(env::Suite::kGoal, 41);
  auto state = env::reset(task, 41);
  auto obs = env::render(state, task);
  const auto a1 = policy(obs);
  const auto a2 = policy(obs);
  CHECK(a1.c == a2.c);
  for (float v : a1.c) {
    CHECK(std::isfinite(v));
    CHECK(v >= -1.0f);
    CHECK(v <= 1.0f);
  }
}

TEST_CASE("model save/load round-trips all tensors") {
  const auto bundle = model::init_model(model::ModelConfig{}, 12);
  const std::string path = "/tmp/vlalab_model_roundtrip.ckpt";
  model::save_model(bundle, path);
  const auto back = model::load_model(path, bundle.cfg);
  REQUIRE(back.groups.size() == bundle.groups.size());
  for (std::size_t g = 0; g < bundle.groups.size(); ++g) {
    REQUIRE(back.groups[g].tensors.size() == bundle.groups[g].tensors.size());
    for (std::size_t t = 0; t < bundle.groups[g].tensors.size(); ++t) {
      CHECK(back.groups[g].tensors[t].first == bundle.groups[g].tensors[t].first);
      CHECK(back.groups[g].tensors[t].second.data ==
            bundle.groups[g].tensors[t].second.data);
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("loading a checkpoint under mismatched dims is rejected") {
  const auto bundle = model::init_model(model::ModelConfig{}, 13);
  const std::string path = "/tmp/vlalab_model_mismatch.ckpt";
  model::save_model(bundle, path);
  model::ModelConfig other;
  other.feature_dim = 48;
  CHECK_THROWS_AS(model::load_model(path, other), MissingArtifact);
  std::remove(path.c_str());
}
