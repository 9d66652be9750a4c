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
#include <filesystem>
#include <vector>

#include "support/gradcheck.hpp"
#include "vlalab/nn/checkpoint.hpp"
#include "vlalab/nn/optimizer.hpp"
#include "vlalab/nn/param.hpp"
#include "vlalab/nn/rng.hpp"
#include "vlalab/nn/tape.hpp"
#include "vlalab/nn/tensor.hpp"

using namespace vlalab;
using testsupport::DId;
using testsupport::DTape;
using testsupport::DTensor;

TEST_CASE("tensor shapes and accessors") {
  nn::Tensor t = nn::Tensor::zeros({3, 4});
  CHECK(t.rows() == 3);
  CHECK(t.cols() == 4);
  CHECK(t.numel() == 12);
  t.at(2, 3) = 5.0f;
  CHECK(t.data[11] == 5.0f);

  nn::Tensor v = nn::Tensor::full({5}, 2.0f);
  CHECK(v.rows() == 1);  // rank-1 reads as a single row
  CHECK(v.cols() == 5);

  nn::Tensor s = nn::Tensor::scalar(7.0f);
  CHECK(s.numel() == 1);
  CHECK(s.data[0] == 7.0f);

  CHECK(t.all_finite());
  t.data[0] = std::numeric_limits<float>::quiet_NaN();
  CHECK_FALSE(t.all_finite());
}

TEST_CASE("rng determinism and ranges") {
  nn::Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next() == b.next());
  }
  CHECK(a.next() != c.next());

  nn::Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    const float u = r.uniform();
    CHECK(u >= 0.0f);
    CHECK(u < 1.0f);
    const float w = r.uniform(-2.0f, 3.0f);
    CHECK(w >= -2.0f);
    CHECK(w < 3.0f);
    CHECK(r.below(17) < 17);
  }

  // Box-Muller moments on a large draw.
  nn::Rng g(11);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = g.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.03);
  CHECK(std::fabs(var - 1.0) < 0.05);

  CHECK(nn::Rng::mix(1, 2) != nn::Rng::mix(2, 1));
  CHECK(nn::Rng::mix(1, 2, 3) != nn::Rng::mix(1, 2, 4));
}

TEST_CASE("hashing is content sensitive") {
  nn::Tensor t = nn::Tensor::full({4, 4}, 1.0f);
  const std::uint64_t h0 = nn::hash_tensor(t);
  t.data[7] += 1e-7f;
  CHECK(nn::hash_tensor(t) != h0);

  nn::ParamGroup g;
  g.name = "g";
  g.tensors.emplace_back("w", nn::Tensor::full({2, 2}, 0.5f));
  const std::uint64_t hg = nn::hash_group(g);
  g.tensors[0].second.data[3] = 0.25f;
  CHECK(nn::hash_group(g) != hg);
}

TEST_CASE("forward values of core ops") {
  DTape tape;
  // linear: y = x W^T + b
  DTensor x({2, 3});
  x.data = {1, 2, 3, 4, 5, 6};
  DTensor w({2, 3});
  w.data = {1, 0, 0, 0, 1, 0};
  DTensor b({2});
  b.data = {10, 20};
  const DId y = tape.linear(tape.constant(x), tape.constant(w), tape.constant(b));
  CHECK(tape.value(y).at(0, 0) == doctest::Approx(11));
  CHECK(tape.value(y).at(0, 1) == doctest::Approx(22));
  CHECK(tape.value(y).at(1, 0) == doctest::Approx(14));

  // softmax rows sum to one
  const DId sm = tape.softmax(y);
  const auto& smv = tape.value(sm);
  CHECK(smv.at(0, 0) + smv.at(0, 1) == doctest::Approx(1.0));

  // cross entropy of uniform logits is log(k)
  DTensor z = DTensor::zeros({4, 8});
  const DId ce = tape.cross_entropy(tape.constant(z), {0, 1, 2, 3});
  CHECK(tape.scalar(ce) == doctest::Approx(std::log(8.0)));

  // mean_sq_dist divides by rows, not elements
  DTensor a2 = DTensor::zeros({2, 2});
  DTensor b2 = DTensor::full({2, 2}, 1.0);
  const DId d = tape.mean_sq_dist(tape.constant(a2), tape.constant(b2));
  CHECK(tape.scalar(d) == doctest::Approx(2.0));

  // mean_pool groups consecutive rows
  DTensor mp({4, 1});
  mp.data = {1, 3, 5, 7};
  const DId pooled = tape.mean_pool(tape.constant(mp), 2);
  CHECK(tape.value(pooled).at(0, 0) == doctest::Approx(2.0));
  CHECK(tape.value(pooled).at(1, 0) == doctest::Approx(6.0));

  // place_patch embeds the pattern at the footprint and zeros elsewhere
  DTensor pat({4});
  pat.data = {1, 2, 3, 4};
  const DId placed = tape.place_patch(tape.constant(pat), 4, 4, 1, 1, 1, 2, 2);
  const auto& pv = tape.value(placed);
  CHECK(pv.data[4 * 1 + 1] == doctest::Approx(1));
  CHECK(pv.data[4 * 1 + 2] == doctest::Approx(2));
  CHECK(pv.data[4 * 2 + 1] == doctest::Approx(3));
  CHECK(pv.data[4 * 2 + 2] == doctest::Approx(4));
  CHECK(pv.data[0] == doctest::Approx(0));
}

TEST_CASE("op contract violations throw") {
  DTape tape;
  const DId a = tape.constant(DTensor::zeros({2, 3}));
  const DId b = tape.constant(DTensor::zeros({3, 2}));
  CHECK_THROWS_AS(tape.add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(tape.mean_pool(a, 5), std::invalid_argument);
  CHECK_THROWS_AS(tape.cross_entropy(a, {0, 1, 9}), std::invalid_argument);
  CHECK_THROWS_AS(tape.cross_entropy(a, {0}), std::invalid_argument);
  CHECK_THROWS_AS(
      tape.place_patch(tape.constant(DTensor::zeros({4})), 4, 4, 1, 3, 3, 2, 2),
      std::invalid_argument);
  CHECK_THROWS_AS(tape.backward(a), std::invalid_argument);
}

TEST_CASE("gradients match central finite differences on random nets") {
  // Unit-level slice of the full 50-network sweep (the acceptance suite
  // runs all 50); tolerance pinned at 1e-4 relative.
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto c = testsupport::random_net_case(seed);
    const double err = testsupport::max_grad_rel_error(c);
    INFO("seed ", seed);
    CHECK(err <= 1e-4);
  }
}

TEST_CASE("gradients of structural ops match finite differences") {
  // embed + mean_pool + patches in one program.
  nn::Rng rng(99);
  testsupport::GradCase c;
  c.params.push_back(testsupport::random_tensor(rng, {6, 4}));     // embed table
  c.params.push_back(testsupport::random_tensor(rng, {2, 16}));    // tiny images
  const DTensor anchor = testsupport::random_tensor(rng, {8, 4});
  c.build = [anchor](DTape& tape, const std::vector<DId>& ids) -> DId {
    const DId emb = tape.embed(ids[0], {0, 5, 2, 1});
    const DId pooled = tape.mean_pool(emb, 2);
    const DId pat = tape.patches(ids[1], 4, 4, 1, 2, 2);  // [2*4, 4]
    const DId joined = tape.concat_cols(pat, tape.constant(anchor));
    const DId dist = tape.mean_sq_dist(joined, tape.constant(DTensor::zeros({8, 8})));
    return tape.add(dist, tape.sum_all(pooled));
  };
  CHECK(testsupport::max_grad_rel_error(c) <= 1e-4);
}

TEST_CASE("stage one loss gradients through the real model graph") {
  const auto c = testsupport::stage1_loss_case(2024);
  CHECK(testsupport::max_grad_rel_error(c) <= 1e-4);
}

TEST_CASE("joint loss gradients through the real model graph") {
  const auto c = testsupport::joint_loss_case(2025);
  CHECK(testsupport::max_grad_rel_error(c) <= 1e-4);
}

TEST_CASE("mixed poisoning loss gradients through the real model graph") {
  const auto c = testsupport::mp_loss_case(2026);
  CHECK(testsupport::max_grad_rel_error(c) <= 1e-4);
}

TEST_CASE("unused parameters get zero gradients, constants get none") {
  DTape tape;
  const DId used = tape.param(DTensor::full({2}, 1.0));
  const DId unused = tape.param(DTensor::full({2}, 1.0));
  const DId cst = tape.constant(DTensor::full({2}, 1.0));
  const DId root = tape.sum_all(used);
  tape.backward(root);
  CHECK(tape.grad(used).data[0] == doctest::Approx(1.0));
  CHECK(tape.grad(unused).data[0] == doctest::Approx(0.0));
  CHECK_FALSE(tape.has_grad(cst));
}

TEST_CASE("learning rate schedule ramps and decays") {
  nn::LrSchedule s;
  s.base = 1.0;
  s.warmup = 4;
  s.decay_every = 10;
  s.decay = 0.5;
  CHECK(s.at(1) == doctest::Approx(0.25));
  CHECK(s.at(4) == doctest::Approx(1.0));
  CHECK(s.at(5) == doctest::Approx(1.0));
  CHECK(s.at(14) == doctest::Approx(1.0));
  CHECK(s.at(15) == doctest::Approx(0.5));
  CHECK(s.at(25) == doctest::Approx(0.25));

  nn::LrSchedule flat;
  flat.base = 0.3;
  CHECK(flat.at(1) == doctest::Approx(0.3));
  CHECK(flat.at(1000) == doctest::Approx(0.3));
}

TEST_CASE("adam first step moves by lr against unit-variance gradient") {
  nn::Tensor theta = nn::Tensor::full({3}, 1.0f);
  nn::Tensor grad = nn::Tensor::zeros({3});
  grad.data = {0.5f, -2.0f, 0.0f};
  nn::Tensor m = nn::Tensor::zeros({3});
  nn::Tensor v = nn::Tensor::zeros({3});
  adam_update(theta, grad, m, v, 1, 0.1, 0.9, 0.999, 1e-8);
  // Bias correction makes the first step lr * g / (|g| + eps) = lr * sign(g).
  CHECK(theta.data[0] == doctest::Approx(1.0f - 0.1f).epsilon(1e-4));
  CHECK(theta.data[1] == doctest::Approx(1.0f + 0.1f).epsilon(1e-4));
  CHECK(theta.data[2] == doctest::Approx(1.0f));

  // Second step against the reference recurrence computed in double.
  nn::Tensor theta2 = theta;
  nn::Tensor grad2 = nn::Tensor::zeros({3});
  grad2.data = {1.0f, 1.0f, 1.0f};
  double md = 0.9 * static_cast<double>(m.data[0]) + 0.1 * 1.0;
  double vd = 0.999 * static_cast<double>(v.data[0]) + 0.001 * 1.0;
  const double want =
      static_cast<double>(theta.data[0]) -
      0.1 * (md / (1.0 - 0.9 * 0.9)) / (std::sqrt(vd / (1.0 - 0.999 * 0.999)) + 1e-8);
  adam_update(theta2, grad2, m, v, 2, 0.1, 0.9, 0.999, 1e-8);
  CHECK(theta2.data[0] == doctest::Approx(want).epsilon(1e-5));
}

TEST_CASE("optimizer leaves frozen groups bit identical") {
  nn::Rng rng(5);
  std::vector<nn::ParamGroup> groups(2);
  groups[0].name = "train";
  groups[1].name = "frozen";
  groups[1].frozen = true;
  for (auto& g : groups) {
    nn::Tensor t = nn::Tensor::zeros({4, 4});
    for (auto& x : t.data) x = rng.uniform(-1.0f, 1.0f);
    g.tensors.emplace_back("w", std::move(t));
  }
  const std::uint64_t frozen_hash = nn::hash_group(groups[1]);

  nn::GradSet grads(2);
  grads[0].push_back(nn::Tensor::full({4, 4}, 1.0f));
  grads[1].push_back(nn::Tensor());  // frozen: no gradient entry

  nn::OptimizerConfig cfg;
  cfg.sched.base = 1e-2;
  nn::Optimizer opt(cfg);
  const float before = groups[0].tensors[0].second.data[0];
  for (int i = 0; i < 10; ++i) opt.step(groups, grads);
  CHECK(groups[0].tensors[0].second.data[0] != before);
  CHECK(nn::hash_group(groups[1]) == frozen_hash);
}

TEST_CASE("checkpoint round trip is bit exact") {
  nn::Rng rng(31);
  std::vector<nn::ParamGroup> groups(3);
  const char* names[] = {"perception", "backbone", "action_head"};
  for (int g = 0; g < 3; ++g) {
    groups[g].name = names[g];
    for (int t = 0; t < 2 + g; ++t) {
      nn::Tensor x = nn::Tensor::zeros({static_cast<std::size_t>(2 + t), 3});
      for (auto& v : x.data) v = rng.uniform(-2.0f, 2.0f);
      groups[g].tensors.emplace_back("t" + std::to_string(t), std::move(x));
    }
  }
  const auto dir = std::filesystem::temp_directory_path() / "vlalab_nn_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "ck.bin").string();
  nn::save_checkpoint(path, groups);
  const auto loaded = nn::load_checkpoint(path);
  REQUIRE(loaded.size() == groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    CHECK(loaded[g].name == groups[g].name);
    CHECK(nn::hash_group(loaded[g]) == nn::hash_group(groups[g]));
  }

  // A truncated file must not load silently.
  {
    std::FILE* f = std::fopen(path.c_str(), "rb+");
    REQUIRE(f != nullptr);
    std::fclose(f);
    std::filesystem::resize_file(path, 10);
  }
  CHECK_THROWS(nn::load_checkpoint(path));
  std::filesystem::remove_all(dir);
}
