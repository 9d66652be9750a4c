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

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "vlalab/env/dataset.hpp"
#include "vlalab/env/render.hpp"
#include "vlalab/env/rollout.hpp"
#include "vlalab/env/sim.hpp"
#include "vlalab/env/types.hpp"
#include "vlalab/errors.hpp"
#include "vlalab/nn/rng.hpp"

using namespace vlalab;

namespace {

std::string temp_path(const char* stem) {
  return std::string("/tmp/vlalab_env_test_") + stem;
}

bool same_image(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("expert achieves full success on every suite") {
  for (auto suite : env::kAllSuites) {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      auto rec = env::rollout_expert(suite, seed);
      if (rec.success) ++wins;
      CHECK(rec.trajectory.size() == rec.actions.size() + 1);
      CHECK(rec.actions.size() <= static_cast<std::size_t>(env::kMaxSteps));
    }
    CHECK(wins >= 99);
  }
}

TEST_CASE("random policy essentially never succeeds") {
  nn::Rng rng(7);
  env::PolicyFn random_policy = [&rng](const env::Observation&) {
    env::ActionVector a;
    for (float& v : a.c) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    return a;
  };
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    if (env::rollout(env::Suite::kSpatial, seed, random_policy).success) ++wins;
  }
  CHECK(wins <= 5);
}

TEST_CASE("rollouts are deterministic in (suite, seed, policy)") {
  for (auto suite : {env::Suite::kSpatial, env::Suite::kLong}) {
    auto a = env::rollout_expert(suite, 42, /*keep_observations=*/true);
    auto b = env::rollout_expert(suite, 42, /*keep_observations=*/true);
    REQUIRE(a.actions.size() == b.actions.size());
    CHECK(a.success == b.success);
    for (std::size_t i = 0; i < a.actions.size(); ++i) {
      CHECK(a.actions[i].c == b.actions[i].c);
      CHECK(same_image(a.observations[i].image, b.observations[i].image));
    }
  }
}

TEST_CASE("render emits values in [0,1] and reacts to gripper state") {
  auto task = env::sample_task(env::Suite::kSpatial, 5);
  auto state = env::reset(task, 5);
  auto open_obs = env::render(state, task);
  CHECK(open_obs.image.size() == static_cast<std::size_t>(env::kImagePixels));
  for (float v : open_obs.image) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
  CHECK(open_obs.instruction == task.instruction);

  state.gripper_closed = true;
  auto closed_obs = env::render(state, task);
  CHECK_FALSE(same_image(open_obs.image, closed_obs.image));
}

TEST_CASE("step clamps the effector to the workspace") {
  auto task = env::sample_task(env::Suite::kSpatial, 9);
  auto state = env::reset(task, 9);
  env::ActionVector a;
  a.c = {-1.0f, -1.0f, -1.0f};
  for (int i = 0; i < 30; ++i) env::step(state, task, a);
  CHECK(state.ee.x >= 0.0f);
  CHECK(state.ee.y >= 0.0f);
  a.c = {31.0f, 0.0f, -1.0f};  // over-unit actions are clamped per step
  auto before = state.ee.x;
  env::step(state, task, a);
  CHECK(state.ee.x <= before + env::kStepScale + 1e-6f);
}

TEST_CASE("two-phase task requires the waypoint before the target counts") {
  auto task = env::sample_task(env::Suite::kLong, 3);
  REQUIRE(task.waypoint_index >= 0);
  auto state = env::reset(task, 3);
  // Teleport the probe state onto the target without visiting the waypoint.
  state.ee = state.object_pos[static_cast<std::size_t>(task.target_index)];
  state.gripper_closed = true;
  CHECK_FALSE(env::success(state, task));
  state.phase = 1;
  CHECK(env::success(state, task));
}

TEST_CASE("suite vocabularies differ pairwise") {
  std::array<std::set<std::uint16_t>, 4> vocab;
  for (std::size_t s = 0; s < env::kAllSuites.size(); ++s) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto task = env::sample_task(env::kAllSuites[s], seed);
      for (auto tok : task.instruction) {
        if (tok != env::kTokPad) vocab[s].insert(tok);
      }
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      std::set<std::uint16_t> diff;
      for (auto t : vocab[i]) {
        if (vocab[j].count(t) == 0) diff.insert(t);
      }
      CHECK_FALSE(diff.empty());
    }
  }
}

TEST_CASE("dataset flattening matches episode actions") {
  env::DataGenConfig cfg;
  cfg.episodes_per_suite = 1;
  cfg.seed = 11;
  auto ds = env::generate_suite_dataset(cfg, env::Suite::kObject);
  auto seeds_used = env::rollout_expert(
      env::Suite::kObject, env::data_episode_seed(cfg.seed, env::Suite::kObject, 0),
      /*keep_observations=*/true);
  REQUIRE(ds.samples.size() == seeds_used.actions.size());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    CHECK(same_image(ds.samples[i].image, seeds_used.observations[i].image));
    for (int d = 0; d < env::kActionDim; ++d) {
      CHECK(ds.samples[i].action[static_cast<std::size_t>(d)] ==
            seeds_used.actions[i].c[static_cast<std::size_t>(d)]);
    }
  }
}

TEST_CASE("dataset save/load round-trips bit-exactly") {
  env::DataGenConfig cfg;
  cfg.episodes_per_suite = 2;
  cfg.seed = 13;
  auto ds = env::generate_suite_dataset(cfg, env::Suite::kSpatial);
  const std::string path = temp_path("roundtrip.bin");
  env::save_dataset(ds, path);
  auto back = env::load_dataset(path);
  REQUIRE(back.samples.size() == ds.samples.size());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    CHECK(same_image(back.samples[i].image, ds.samples[i].image));
    CHECK(back.samples[i].instruction == ds.samples[i].instruction);
    CHECK(back.samples[i].action == ds.samples[i].action);
    CHECK_FALSE(back.samples[i].poisoned);
  }
  std::remove(path.c_str());
}

TEST_CASE("identical generator runs produce byte-identical files") {
  env::DataGenConfig cfg;
  cfg.episodes_per_suite = 2;
  cfg.seed = 17;
  const std::string p1 = temp_path("gen1.bin");
  const std::string p2 = temp_path("gen2.bin");
  env::save_dataset(env::generate_suite_dataset(cfg, env::Suite::kGoal), p1);
  env::save_dataset(env::generate_suite_dataset(cfg, env::Suite::kGoal), p2);
  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
  CHECK_FALSE(s1.empty());
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("truncated dataset file is rejected") {
  env::DataGenConfig cfg;
  cfg.episodes_per_suite = 1;
  cfg.seed = 19;
  auto ds = env::generate_suite_dataset(cfg, env::Suite::kSpatial);
  const std::string path = temp_path("trunc.bin");
  env::save_dataset(ds, path);
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  in.close();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  out.close();
  CHECK_THROWS_AS(env::load_dataset(path), MissingArtifact);
  std::remove(path.c_str());
}

TEST_CASE("episode log is JSON lines with scalar facts only") {
  std::vector<env::EpisodeRecord> recs;
  recs.push_back(env::rollout_expert(env::Suite::kSpatial, 23));
  recs.push_back(env::rollout_expert(env::Suite::kLong, 23));
  const std::string path = temp_path("episodes.jsonl");
  env::write_episode_log(recs, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(line.front() == '{');
    CHECK(line.back() == '}');
    CHECK(line.find("image") == std::string::npos);
  }
  CHECK(lines == 2);
  std::remove(path.c_str());
}

TEST_CASE("trigger flag stores the trigger in every observation") {
  auto spec = attack::make_patch_trigger(0.05f, attack::Anchor::kTopLeft);
  env::RolloutOptions opts;
  opts.trigger = &spec;
  opts.keep_observations = true;
  auto plain = env::rollout_expert(env::Suite::kSpatial, 31, true);
  auto together = env::rollout(
      env::Suite::kSpatial, 31,
      [&](const env::Observation& obs) {
        // The expert is driven by state, not pixels; recompute its action via
        // the recorded step count to keep the comparison aligned.
        (void)obs;
        return env::ActionVector{};
      },
      opts);
  CHECK(together.trigger_active);
  // Footprint pixels differ from the clean render on the first frame.
  REQUIRE_FALSE(together.observations.empty());
  REQUIRE_FALSE(plain.observations.empty());
  CHECK_FALSE(same_image(together.observations[0].image, plain.observations[0].image));
}
