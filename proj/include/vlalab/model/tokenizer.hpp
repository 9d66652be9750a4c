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

#ifndef VLALAB_MODEL_TOKENIZER_HPP_
#define VLALAB_MODEL_TOKENIZER_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

namespace vlalab::model {

// Uniform-bin action discretization over [-1, 1].
// tokenize: clamp, then floor((a + 1) / 2 * bins), clamped to the last bin
// so a == 1 maps to bins - 1. detokenize returns the bin center, so the
// round trip moves any in-range value by at most half a bin width.
inline int tokenize_value(float a, int bins) {
  const float clamped = std::clamp(a, -1.0f, 1.0f);
  const int t = static_cast<int>(std::floor((clamped + 1.0f) / 2.0f * static_cast<float>(bins)));
  return std::clamp(t, 0, bins - 1);
}

inline float detokenize_value(int token, int bins) {
  return -1.0f + (2.0f * static_cast<float>(token) + 1.0f) / static_cast<float>(bins);
}

inline std::vector<int> tokenize_action(const std::vector<float>& a, int bins) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = tokenize_value(a[i], bins);
  return out;
}

inline std::vector<float> detokenize_action(const std::vector<int>& t, int bins) {
  std::vector<float> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = detokenize_value(t[i], bins);
  return out;
}

}  // namespace vlalab::model

#endif  // VLALAB_MODEL_TOKENIZER_HPP_
