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

#include "vlalab/attack/trigger.hpp"
#include "vlalab/env/types.hpp"

namespace vlalab::env {

// Deterministic flat-shaded 32x32x3 rasterization in [0,1]. No gradients,
// no anti-aliasing. Draw order: background, scene objects, trigger object
// (rendered_object kind), end effector; patch triggers composite last over
// the finished frame via attack::apply_trigger_image.
Observation render(const EnvState& state, const TaskSpec& task,
                   const attack::TriggerSpec* trigger = nullptr);

// Workspace position the rendered trigger object would occupy, after
// collision avoidance against the task's objects. Throws when every
// placement cell is occupied.
Vec2 trigger_object_position(const EnvState& state, const attack::TriggerSpec& spec);

}  // namespace vlalab::env
