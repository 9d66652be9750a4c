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

#include "vlalab/env/sim.hpp"

#include <algorithm>

#include "vlalab/nn/rng.hpp"

namespace vlalab::env {
namespace {

using nn::Rng;

constexpr std::uint64_t kTaskSalt = 0x7461736bULL;    // "task"
constexpr std::uint64_t kResetSalt = 0x72657374ULL;   // "rest"

std::vector<std::uint16_t> pad_instruction(std::vector<std::uint16_t> toks) {
  toks.resize(kInstrLen, kTokPad);
  return toks;
}

std::vector<std::uint16_t> reach_instruction(const ObjectSpec& target) {
  return pad_instruction({kTokGo, kTokThe, color_token(target.color),
                          shape_token(target.shape)});
}

std::vector<std::uint16_t> two_phase_instruction(const ObjectSpec& first,
                                                 const ObjectSpec& second) {
  return pad_instruction({kTokGo, color_token(first.color), shape_token(first.shape),
                          kTokThen, color_token(second.color),
                          shape_token(second.shape)});
}

// Three distinct cells out of the 16 interior placement cells.
std::array<int, 3> sample_cells(Rng& rng) {
  std::array<int, 3> cells{};
  for (int i = 0; i < 3; ++i) {
    bool fresh = false;
    while (!fresh) {
      cells[i] = static_cast<int>(rng.below(16));
      fresh = true;
      for (int j = 0; j < i; ++j) {
        if (cells[j] == cells[i]) fresh = false;
      }
    }
  }
  return cells;
}

Vec2 goal_position(const EnvState& state, const TaskSpec& task) {
  const int idx = (task.waypoint_index >= 0 && state.phase == 0)
                      ? task.waypoint_index
                      : task.target_index;
  return state.object_pos[static_cast<std::size_t>(idx)];
}

}  // namespace

TaskSpec sample_task(Suite suite, std::uint64_t seed) {
  Rng rng(Rng::mix(kTaskSalt, Rng::mix(static_cast<std::uint64_t>(suite), seed)));
  const auto colors = suite_colors(suite);
  TaskSpec task;
  task.suite = suite;
  task.task_seed = seed;
  switch (suite) {
    case Suite::kSpatial: {
      const auto cells = sample_cells(rng);
      task.objects = {{ObjShape::kSquare, colors[0], cells[0]},
                      {ObjShape::kDisc, colors[1], cells[1]},
                      {ObjShape::kSquare, colors[2], cells[2]}};
      task.target_index = 0;
      task.instruction = reach_instruction(task.objects[0]);
      break;
    }
    case Suite::kObject: {
      // Fixed cells; color assignment and shapes resampled per seed.
      const std::array<int, 3> cells = {5, 6, 10};
      std::array<int, 3> perm = {0, 1, 2};
      for (int i = 2; i > 0; --i) {
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
      }
      task.objects.clear();
      for (int i = 0; i < 3; ++i) {
        const ObjShape shape = rng.below(2) == 0 ? ObjShape::kSquare : ObjShape::kDisc;
        task.objects.push_back({shape, colors[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])], cells[static_cast<std::size_t>(i)]});
      }
      task.target_index = static_cast<int>(rng.below(3));
      task.instruction = reach_instruction(task.objects[static_cast<std::size_t>(task.target_index)]);
      break;
    }
    case Suite::kGoal: {
      // Fully fixed scene; only the commanded goal varies.
      task.objects = {{ObjShape::kSquare, colors[0], 1},
                      {ObjShape::kDisc, colors[1], 10},
                      {ObjShape::kSquare, colors[2], 14}};
      task.target_index = static_cast<int>(rng.below(3));
      task.instruction = reach_instruction(task.objects[static_cast<std::size_t>(task.target_index)]);
      break;
    }
    case Suite::kLong: {
      const auto cells = sample_cells(rng);
      task.objects = {{ObjShape::kSquare, colors[0], cells[0]},
                      {ObjShape::kDisc, colors[1], cells[1]},
                      {ObjShape::kSquare, colors[2], cells[2]}};
      task.waypoint_index = static_cast<int>(rng.below(3));
      task.target_index = static_cast<int>(rng.below(2));
      if (task.target_index >= task.waypoint_index) ++task.target_index;
      task.template_id = 1;
      task.instruction = two_phase_instruction(
          task.objects[static_cast<std::size_t>(task.waypoint_index)],
          task.objects[static_cast<std::size_t>(task.target_index)]);
      break;
    }
  }
  return task;
}

EnvState reset(const TaskSpec& task, std::uint64_t seed) {
  Rng rng(Rng::mix(kResetSalt, Rng::mix(task.task_seed, seed)));
  EnvState state;
  // Spawn in the corner margin outside the placement grid (cells span
  // 0.2..0.8), so reaching any object takes a deliberate multi-step path and
  // a random walk almost never wins an episode.
  state.ee.x = 0.08f + static_cast<float>(rng.uniform(-0.04, 0.04));
  state.ee.y = 0.08f + static_cast<float>(rng.uniform(-0.04, 0.04));
  state.object_pos.clear();
  state.object_pos.reserve(task.objects.size());
  for (const auto& obj : task.objects) state.object_pos.push_back(cell_center(obj.cell));
  state.rng_stream = seed;
  return state;
}

bool step(EnvState& state, const TaskSpec& task, const ActionVector& action) {
  const float dx = std::clamp(action.dx(), -1.0f, 1.0f) * kStepScale;
  const float dy = std::clamp(action.dy(), -1.0f, 1.0f) * kStepScale;
  state.ee.x = std::clamp(state.ee.x + dx, 0.0f, 1.0f);
  state.ee.y = std::clamp(state.ee.y + dy, 0.0f, 1.0f);
  state.gripper_closed = action.grip() > 0.0f;
  if (task.waypoint_index >= 0 && state.phase == 0 && state.gripper_closed &&
      dist(state.ee, state.object_pos[static_cast<std::size_t>(task.waypoint_index)]) <=
          kSuccessRadius) {
    state.phase = 1;
  }
  ++state.step_count;
  return success(state, task) || state.step_count >= task.max_steps;
}

bool success(const EnvState& state, const TaskSpec& task) {
  if (task.waypoint_index >= 0 && state.phase == 0) return false;
  return state.gripper_closed &&
         dist(state.ee, state.object_pos[static_cast<std::size_t>(task.target_index)]) <=
             kSuccessRadius;
}

ActionVector expert_action(const EnvState& state, const TaskSpec& task) {
  const Vec2 goal = goal_position(state, task);
  ActionVector a;
  a.c[0] = std::clamp((goal.x - state.ee.x) / kStepScale, -1.0f, 1.0f);
  a.c[1] = std::clamp((goal.y - state.ee.y) / kStepScale, -1.0f, 1.0f);
  const bool near_goal = dist(state.ee, goal) <= 0.05f;
  const bool hold_closed = task.waypoint_index >= 0 && state.phase == 1;
  a.c[2] = (near_goal || hold_closed) ? 1.0f : -1.0f;
  return a;
}

}  // namespace vlalab::env
