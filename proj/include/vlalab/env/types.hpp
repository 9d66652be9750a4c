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

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vlalab/errors.hpp"

namespace vlalab::env {

// Image geometry and control constants for the tabletop world.
inline constexpr int kImageH = 32;
inline constexpr int kImageW = 32;
inline constexpr int kImageC = 3;
inline constexpr int kImagePixels = kImageH * kImageW * kImageC;
inline constexpr float kStepScale = 0.1f;     // workspace units per unit action
inline constexpr float kSuccessRadius = 0.06f;
inline constexpr int kMaxSteps = 40;
inline constexpr int kActionDim = 3;          // dPx, dPy, gripper
inline constexpr int kInstrLen = 8;
inline constexpr int kVocabSize = 64;

// Four task families. kLong is a two-phase reach-then-reach task.
enum class Suite { kSpatial = 0, kObject = 1, kGoal = 2, kLong = 3 };

inline constexpr std::array<Suite, 4> kAllSuites = {Suite::kSpatial, Suite::kObject,
                                                    Suite::kGoal, Suite::kLong};

inline const char* suite_name(Suite s) {
  switch (s) {
    case Suite::kSpatial: return "spatial";
    case Suite::kObject: return "object";
    case Suite::kGoal: return "goal";
    case Suite::kLong: return "long";
  }
  return "?";
}

inline Suite suite_from_name(const std::string& name) {
  for (Suite s : kAllSuites) {
    if (name == suite_name(s)) return s;
  }
  throw ConfigError("unknown suite: " + name);
}

enum class ObjShape { kSquare = 0, kDisc = 1 };

struct ObjectSpec {
  ObjShape shape = ObjShape::kSquare;
  int color = 0;  // palette index
  int cell = 0;   // placement cell, 0..15 on a 4x4 interior grid
};

struct Vec2 {
  float x = 0.0f;
  float y = 0.0f;
};

inline float dist(Vec2 a, Vec2 b) {
  const float dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Placement cells sit at 0.2..0.8, well inside the workspace walls.
inline Vec2 cell_center(int cell) {
  const int r = cell / 4, c = cell % 4;
  return {0.2f + 0.2f * static_cast<float>(c), 0.2f + 0.2f * static_cast<float>(r)};
}

// Twelve-color palette; each suite owns a disjoint triple so the four
// suites' goal vocabularies pairwise differ.
inline constexpr std::array<std::array<float, 3>, 12> kPalette = {{
    {0.90f, 0.20f, 0.20f}, {0.20f, 0.85f, 0.25f}, {0.25f, 0.35f, 0.95f},  // spatial
    {0.92f, 0.88f, 0.20f}, {0.88f, 0.25f, 0.88f}, {0.20f, 0.88f, 0.88f},  // object
    {0.95f, 0.55f, 0.15f}, {0.55f, 0.25f, 0.75f}, {0.55f, 0.90f, 0.35f},  // goal
    {0.70f, 0.50f, 0.30f}, {0.40f, 0.60f, 0.85f}, {0.85f, 0.45f, 0.60f},  // long
}};

inline std::array<int, 3> suite_colors(Suite s) {
  const int base = static_cast<int>(s) * 3;
  return {base, base + 1, base + 2};
}

// Instruction vocabulary. Color tokens are 8+color, shape tokens 24/25.
inline constexpr std::uint16_t kTokPad = 0;
inline constexpr std::uint16_t kTokGo = 1;
inline constexpr std::uint16_t kTokThe = 2;
inline constexpr std::uint16_t kTokThen = 3;
inline std::uint16_t color_token(int color) { return static_cast<std::uint16_t>(8 + color); }
inline std::uint16_t shape_token(ObjShape s) {
  return static_cast<std::uint16_t>(24 + static_cast<int>(s));
}

struct TaskSpec {
  Suite suite = Suite::kSpatial;
  std::vector<ObjectSpec> objects;
  int target_index = 0;
  int waypoint_index = -1;  // >= 0 only for two-phase tasks
  int template_id = 0;
  std::vector<std::uint16_t> instruction;  // kInstrLen tokens, zero padded
  int max_steps = kMaxSteps;
  std::uint64_t task_seed = 0;
};

struct EnvState {
  Vec2 ee;
  bool gripper_closed = false;
  std::vector<Vec2> object_pos;
  int step_count = 0;
  int phase = 0;  // two-phase tasks advance to 1 after touching the waypoint
  std::uint64_t rng_stream = 0;
};

struct Observation {
  std::vector<float> image;               // kImagePixels floats in [0,1]
  std::vector<std::uint16_t> instruction; // kInstrLen tokens
};

struct ActionVector {
  std::array<float, kActionDim> c{};

  float dx() const { return c[0]; }
  float dy() const { return c[1]; }
  float grip() const { return c[2]; }

  bool finite() const {
    for (float v : c) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

struct EpisodeRecord {
  Suite suite = Suite::kSpatial;
  std::uint64_t seed = 0;
  std::vector<Observation> observations;  // one per executed action
  std::vector<ActionVector> actions;
  std::vector<Vec2> trajectory;  // length = actions + 1
  bool success = false;
  bool trigger_active = false;
  bool nonfinite_action = false;
};

}  // namespace vlalab::env
