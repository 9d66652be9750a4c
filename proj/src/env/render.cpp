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

#include "vlalab/env/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace vlalab::env {
namespace {

constexpr std::array<float, 3> kBackground = {0.12f, 0.12f, 0.14f};
constexpr std::array<float, 3> kEffectorOpen = {0.95f, 0.95f, 0.95f};
constexpr std::array<float, 3> kEffectorClosed = {0.95f, 0.80f, 0.20f};
// Reserved trigger color, deliberately outside every suite palette.
constexpr std::array<float, 3> kTriggerColor = {1.00f, 0.05f, 0.55f};

int to_px(float v) {
  return std::clamp(static_cast<int>(std::lround(v * 31.0f)), 0, 31);
}

void put(std::vector<float>& img, int row, int col, const std::array<float, 3>& c) {
  if (row < 0 || row >= kImageH || col < 0 || col >= kImageW) return;
  float* p = img.data() + (static_cast<std::size_t>(row) * kImageW + col) * kImageC;
  p[0] = c[0];
  p[1] = c[1];
  p[2] = c[2];
}

void draw_square(std::vector<float>& img, Vec2 pos, const std::array<float, 3>& color) {
  const int cr = to_px(pos.y), cc = to_px(pos.x);
  for (int r = cr - 2; r <= cr + 2; ++r) {
    for (int c = cc - 2; c <= cc + 2; ++c) put(img, r, c, color);
  }
}

void draw_disc(std::vector<float>& img, Vec2 pos, float radius,
               const std::array<float, 3>& color) {
  const int cr = to_px(pos.y), cc = to_px(pos.x);
  const int b = static_cast<int>(std::ceil(radius));
  for (int r = cr - b; r <= cr + b; ++r) {
    for (int c = cc - b; c <= cc + b; ++c) {
      const float dr = static_cast<float>(r - cr), dc = static_cast<float>(c - cc);
      if (dr * dr + dc * dc <= radius * radius) put(img, r, c, color);
    }
  }
}

void draw_cross(std::vector<float>& img, Vec2 pos, const std::array<float, 3>& color) {
  const int cr = to_px(pos.y), cc = to_px(pos.x);
  for (int d = -2; d <= 2; ++d) {
    put(img, cr, cc + d, color);
    put(img, cr + d, cc, color);
  }
}

Vec2 anchor_workspace(const attack::TriggerSpec& spec) {
  switch (spec.anchor) {
    case attack::Anchor::kCenter: return {0.5f, 0.5f};
    case attack::Anchor::kTopLeft: return {0.12f, 0.12f};
    case attack::Anchor::kBottomRight: return {0.88f, 0.88f};
    case attack::Anchor::kCustom: return {spec.custom_x, spec.custom_y};
  }
  return {0.5f, 0.5f};
}

}  // namespace

Vec2 trigger_object_position(const EnvState& state, const attack::TriggerSpec& spec) {
  constexpr float kClearance = 0.11f;
  const Vec2 anchor = anchor_workspace(spec);
  std::vector<Vec2> candidates;
  candidates.push_back(anchor);
  // All placement cells, nearest to the anchor first, index as tiebreak.
  std::vector<int> cells(16);
  std::iota(cells.begin(), cells.end(), 0);
  std::stable_sort(cells.begin(), cells.end(), [&](int a, int b) {
    return dist(cell_center(a), anchor) < dist(cell_center(b), anchor);
  });
  for (int cell : cells) candidates.push_back(cell_center(cell));
  for (const Vec2& cand : candidates) {
    bool clear = true;
    for (const Vec2& obj : state.object_pos) {
      if (dist(cand, obj) < kClearance) {
        clear = false;
        break;
      }
    }
    if (clear) return cand;
  }
  throw ConfigError("trigger object placement collides with all free cells");
}

Observation render(const EnvState& state, const TaskSpec& task,
                   const attack::TriggerSpec* trigger) {
  Observation obs;
  obs.instruction = task.instruction;
  obs.image.resize(kImagePixels);
  for (int i = 0; i < kImageH * kImageW; ++i) {
    float* p = obs.image.data() + static_cast<std::size_t>(i) * kImageC;
    p[0] = kBackground[0];
    p[1] = kBackground[1];
    p[2] = kBackground[2];
  }
  for (std::size_t i = 0; i < task.objects.size(); ++i) {
    const auto& spec = task.objects[i];
    const auto& color = kPalette[static_cast<std::size_t>(spec.color)];
    if (spec.shape == ObjShape::kSquare) {
      draw_square(obs.image, state.object_pos[i], color);
    } else {
      draw_disc(obs.image, state.object_pos[i], 2.5f, color);
    }
  }
  if (trigger != nullptr && trigger->kind == attack::TriggerKind::kRenderedObject) {
    draw_disc(obs.image, trigger_object_position(state, *trigger), 3.0f, kTriggerColor);
  }
  draw_cross(obs.image, state.ee, state.gripper_closed ? kEffectorClosed : kEffectorOpen);
  if (trigger != nullptr && trigger->kind == attack::TriggerKind::kPatch) {
    attack::apply_trigger_image(obs.image, *trigger);
  }
  return obs;
}

}  // namespace vlalab::env
