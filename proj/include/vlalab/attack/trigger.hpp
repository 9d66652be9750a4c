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

#include <cmath>
#include <string>
#include <vector>

#include "vlalab/env/types.hpp"

namespace vlalab::attack {

enum class TriggerKind { kPatch, kRenderedObject };

enum class Anchor { kCenter, kTopLeft, kBottomRight, kCustom };

const char* trigger_kind_name(TriggerKind k);
const char* anchor_name(Anchor a);
TriggerKind trigger_kind_from_name(const std::string& s);
Anchor anchor_from_name(const std::string& s);

// Visual trigger description. For kPatch the pattern is an additive
// perturbation delta over a square footprint whose side is
// floor(sqrt(size_fraction * H * W)); compositing clamps to [0,1] and the
// squared L2 norm of delta never exceeds eps (projection enforced). For
// kRenderedObject a distractor disc of a reserved color is drawn in-scene
// and the pattern/eps fields are unused.
struct TriggerSpec {
  TriggerKind kind = TriggerKind::kPatch;
  std::vector<float> pattern;  // side*side*C additive values (patch kind)
  int side = 0;
  Anchor anchor = Anchor::kCenter;
  float custom_x = 0.5f;  // used when anchor == kCustom, in [0,1]
  float custom_y = 0.5f;
  float size_fraction = 0.05f;
  float eps = 4.0f;  // squared-L2 budget for the pattern
  bool learnable = false;

  // Top-left pixel of the footprint inside an H x W image.
  std::pair<int, int> footprint_origin(int h, int w) const;
};

// Footprint side for a coverage fraction of an H x W image.
int footprint_side(float fraction, int h, int w);

// Fixed low-frequency two-color checkerboard pattern, projected into the
// eps ball. cell is the checker cell size in pixels.
TriggerSpec make_patch_trigger(float fraction, Anchor anchor, float eps = 4.0f,
                               bool learnable = false, float amp = 0.8f,
                               int cell = 4, int img_h = env::kImageH,
                               int img_w = env::kImageW);

TriggerSpec make_object_trigger(Anchor anchor);

float pattern_sq_norm(const TriggerSpec& spec);

// Scales the pattern so that ||delta||_2^2 <= eps. No-op when already inside.
void project_pattern(TriggerSpec& spec);

// Additive patch compositing with clamping, in place. Patch kind only.
void apply_trigger_image(std::vector<float>& image, const TriggerSpec& spec,
                         int h = env::kImageH, int w = env::kImageW,
                         int c = env::kImageC);

// Pure observation-level wrapper around apply_trigger_image.
env::Observation apply_trigger(const env::Observation& obs, const TriggerSpec& spec);

}  // namespace vlalab::attack
