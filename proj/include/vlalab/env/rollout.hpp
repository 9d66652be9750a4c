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

#ifndef VLALAB_ENV_ROLLOUT_HPP_
#define VLALAB_ENV_ROLLOUT_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vlalab/attack/trigger.hpp"
#include "vlalab/env/types.hpp"

namespace vlalab::env {

// Maps the current observation to an action. Implementations must be pure:
// identical observations produce identical actions.
using PolicyFn = std::function<ActionVector(const Observation&)>;

struct RolloutOptions {
  // When set, every rendered frame carries the trigger before the policy
  // sees it. The environment dynamics are unchanged.
  const attack::TriggerSpec* trigger = nullptr;
  // Keep per-step observations in the record (needed for representation
  // analyses; off by default to bound memory).
  bool keep_observations = false;
};

// Runs one closed-loop episode. A non-finite policy action aborts the
// episode as a failure and flags the record.
EpisodeRecord rollout(Suite suite, std::uint64_t seed, const PolicyFn& policy,
                      const RolloutOptions& opts = {});

// Runs the scripted expert (no trigger).
EpisodeRecord rollout_expert(Suite suite, std::uint64_t seed,
                             bool keep_observations = false);

// One JSON object per line, fixed key order, no timestamps. Images are
// never serialized, only scalar episode facts.
void write_episode_log(const std::vector<EpisodeRecord>& episodes,
                       const std::string& path);

}  // namespace vlalab::env

#endif  // VLALAB_ENV_ROLLOUT_HPP_
