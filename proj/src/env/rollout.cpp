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

#include "vlalab/env/rollout.hpp"

#include <fstream>

#include "json.hpp"
#include "vlalab/env/render.hpp"
#include "vlalab/env/sim.hpp"
#include "vlalab/errors.hpp"

namespace vlalab::env {

EpisodeRecord rollout(Suite suite, std::uint64_t seed, const PolicyFn& policy,
                      const RolloutOptions& opts) {
  const TaskSpec task = sample_task(suite, seed);
  EnvState state = reset(task, seed);
  EpisodeRecord rec;
  rec.suite = suite;
  rec.seed = seed;
  rec.trigger_active = opts.trigger != nullptr;
  rec.trajectory.push_back(state.ee);
  for (;;) {
    Observation obs = render(state, task, opts.trigger);
    const ActionVector act = policy(obs);
    if (!act.finite()) {
      rec.nonfinite_action = true;
      return rec;
    }
    if (opts.keep_observations) rec.observations.push_back(std::move(obs));
    rec.actions.push_back(act);
    const bool done = step(state, task, act);
    rec.trajectory.push_back(state.ee);
    if (done) break;
  }
  rec.success = success(state, task);
  return rec;
}

EpisodeRecord rollout_expert(Suite suite, std::uint64_t seed, bool keep_observations) {
  const TaskSpec task = sample_task(suite, seed);
  EnvState state = reset(task, seed);
  EpisodeRecord rec;
  rec.suite = suite;
  rec.seed = seed;
  rec.trajectory.push_back(state.ee);
  for (;;) {
    if (keep_observations) rec.observations.push_back(render(state, task));
    const ActionVector act = expert_action(state, task);
    rec.actions.push_back(act);
    const bool done = step(state, task, act);
    rec.trajectory.push_back(state.ee);
    if (done) break;
  }
  rec.success = success(state, task);
  return rec;
}

void write_episode_log(const std::vector<EpisodeRecord>& episodes,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingArtifact("cannot open for write: " + path);
  for (const EpisodeRecord& ep : episodes) {
    nlohmann::ordered_json line;
    line["suite"] = suite_name(ep.suite);
    line["seed"] = ep.seed;
    line["steps"] = ep.actions.size();
    line["success"] = ep.success;
    line["trigger"] = ep.trigger_active;
    line["nonfinite_action"] = ep.nonfinite_action;
    line["final_x"] = ep.trajectory.empty() ? 0.0f : ep.trajectory.back().x;
    line["final_y"] = ep.trajectory.empty() ? 0.0f : ep.trajectory.back().y;
    out << line.dump() << "\n";
  }
  if (!out) throw MissingArtifact("write failed: " + path);
}

}  // namespace vlalab::env
