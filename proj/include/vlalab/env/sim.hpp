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

#pragma once

#include <cstdint>

#include "vlalab/env/types.hpp"

namespace vlalab::env {

// Deterministic task sampling. The same (suite, seed) always produces the
// same TaskSpec; what varies across seeds depends on the suite:
//   spatial: fixed identities, positions resampled
//   object:  fixed positions, identities resampled
//   goal:    fully fixed scene, instruction goal resampled
//   long:    fixed identities, positions and the waypoint/target pair resampled
TaskSpec sample_task(Suite suite, std::uint64_t seed);

// Fresh state for a task. Same (task, seed) twice gives identical states.
EnvState reset(const TaskSpec& task, std::uint64_t seed);

// Applies one action: end effector moves by kStepScale * clamped deltas and
// is clamped to the unit workspace; gripper closes iff grip() > 0. Returns
// true when the episode is over (success or step budget exhausted).
bool step(EnvState& state, const TaskSpec& task, const ActionVector& action);

// True iff the end effector is within kSuccessRadius of the target object
// with the gripper closed (two-phase tasks additionally require phase 1).
bool success(const EnvState& state, const TaskSpec& task);

// Scripted proportional controller toward the current goal; closes the
// gripper inside the goal radius. Solves every task well inside max_steps.
ActionVector expert_action(const EnvState& state, const TaskSpec& task);

}  // namespace vlalab::env
