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

#include "vlalab/attack/trigger.hpp"

#include <algorithm>
#include <stdexcept>

#include "vlalab/errors.hpp"

namespace vlalab::attack {

const char* trigger_kind_name(TriggerKind k) {
  return k == TriggerKind::kPatch ? "patch" : "rendered_object";
}

const char* anchor_name(Anchor a) {
  switch (a) {
    case Anchor::kCenter: return "center";
    case Anchor::kTopLeft: return "top_left";
    case Anchor::kBottomRight: return "bottom_right";
    case Anchor::kCustom: return "custom";
  }
  return "?";
}

TriggerKind trigger_kind_from_name(const std::string& s) {
  if (s == "patch") return TriggerKind::kPatch;
  if (s == "rendered_object") return TriggerKind::kRenderedObject;
  throw ConfigError("unknown trigger kind: " + s);
}

Anchor anchor_from_name(const std::string& s) {
  if (s == "center") return Anchor::kCenter;
  if (s == "top_left") return Anchor::kTopLeft;
  if (s == "bottom_right") return Anchor::kBottomRight;
  if (s == "custom") return Anchor::kCustom;
  throw ConfigError("unknown anchor: " + s);
}

int footprint_side(float fraction, int h, int w) {
  if (fraction <= 0.0f || fraction > 1.0f) {
    throw ConfigError("trigger size fraction must be in (0, 1]");
  }
  const int side = static_cast<int>(std::floor(
      std::sqrt(static_cast<double>(fraction) * h * w)));
  return std::max(side, 1);
}

std::pair<int, int> TriggerSpec::footprint_origin(int h, int w) const {
  switch (anchor) {
    case Anchor::kCenter:
      return {(h - side) / 2, (w - side) / 2};
    case Anchor::kTopLeft:
      return {0, 0};
    case Anchor::kBottomRight:
      return {h - side, w - side};
    case Anchor::kCustom: {
      const int r = static_cast<int>(std::lround(custom_y * static_cast<float>(h - side)));
      const int c = static_cast<int>(std::lround(custom_x * static_cast<float>(w - side)));
      return {std::clamp(r, 0, h - side), std::clamp(c, 0, w - side)};
    }
  }
  return {0, 0};
}

TriggerSpec make_patch_trigger(float fraction, Anchor anchor, float eps,
                               bool learnable, float amp, int cell, int img_h,
                               int img_w) {
  if (eps <= 0.0f) throw ConfigError("trigger eps must be positive");
  TriggerSpec spec;
  spec.kind = TriggerKind::kPatch;
  spec.anchor = anchor;
  spec.size_fraction = fraction;
  spec.eps = eps;
  spec.learnable = learnable;
  spec.side = footprint_side(fraction, img_h, img_w);
  if (spec.side > img_h || spec.side > img_w) {
    throw ConfigError("trigger footprint exceeds image");
  }
  spec.pattern.resize(static_cast<std::size_t>(spec.side) * spec.side * env::kImageC);
  const int cs = std::max(cell, 1);
  for (int y = 0; y < spec.side; ++y) {
    for (int x = 0; x < spec.side; ++x) {
      const bool pos = ((y / cs) + (x / cs)) % 2 == 0;
      float* px = spec.pattern.data() +
                  (static_cast<std::size_t>(y) * spec.side + x) * env::kImageC;
      px[0] = pos ? amp : -amp;
      px[1] = pos ? -amp : amp;
      px[2] = pos ? -amp : amp;
    }
  }
  project_pattern(spec);
  return spec;
}

TriggerSpec make_object_trigger(Anchor anchor) {
  TriggerSpec spec;
  spec.kind = TriggerKind::kRenderedObject;
  spec.anchor = anchor;
  spec.side = 0;
  return spec;
}

float pattern_sq_norm(const TriggerSpec& spec) {
  double acc = 0.0;
  for (float v : spec.pattern) acc += static_cast<double>(v) * v;
  return static_cast<float>(acc);
}

void project_pattern(TriggerSpec& spec) {
  const double sq = pattern_sq_norm(spec);
  if (sq <= static_cast<double>(spec.eps) || sq == 0.0) return;
  const float s = static_cast<float>(std::sqrt(static_cast<double>(spec.eps) / sq));
  for (float& v : spec.pattern) v *= s;
}

void apply_trigger_image(std::vector<float>& image, const TriggerSpec& spec,
                         int h, int w, int c) {
  if (spec.kind != TriggerKind::kPatch) {
    throw std::invalid_argument("apply_trigger: patch kind only");
  }
  if (image.size() != static_cast<std::size_t>(h) * w * c) {
    throw std::invalid_argument("apply_trigger: image size mismatch");
  }
  const auto [r0, c0] = spec.footprint_origin(h, w);
  if (r0 < 0 || c0 < 0 || r0 + spec.side > h || c0 + spec.side > w) {
    throw std::invalid_argument("apply_trigger: footprint outside image bounds");
  }
  std::size_t t = 0;
  for (int y = 0; y < spec.side; ++y) {
    float* row = image.data() + ((static_cast<std::size_t>(r0 + y)) * w + c0) * c;
    for (int i = 0; i < spec.side * c; ++i) {
      row[i] = std::clamp(row[i] + spec.pattern[t++], 0.0f, 1.0f);
    }
  }
}

env::Observation apply_trigger(const env::Observation& obs, const TriggerSpec& spec) {
  env::Observation out = obs;
  apply_trigger_image(out.image, spec);
  return out;
}

}  // namespace vlalab::attack
