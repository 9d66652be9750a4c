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

#ifndef VLALAB_MODEL_CONFIG_HPP_
#define VLALAB_MODEL_CONFIG_HPP_

#include "vlalab/env/types.hpp"

namespace vlalab::model {

// Two normalized patch-center coordinates appended to each flattened patch
// so the mean-pooled image feature stays position aware.
inline constexpr int kPatchCoordFeatures = 2;

struct ModelConfig {
  int patch = 4;            // square patch side in pixels
  int feature_dim = 64;     // fused perception feature width
  int instr_embed_dim = 16;
  int hidden = 128;         // backbone width
  int bins = 32;            // discretization bins per action dimension
  int prev_embed_dim = 16;  // previous-token feedback embedding width
  int action_dim = env::kActionDim;

  int patches_per_image() const {
    return (env::kImageH / patch) * (env::kImageW / patch);
  }
  int patch_vec_dim() const {
    return patch * patch * env::kImageC + kPatchCoordFeatures;
  }
  int fused_in_dim() const { return feature_dim + instr_embed_dim; }
  int head_in_dim() const { return hidden + prev_embed_dim; }
  int start_token() const { return bins; }  // one past the last real token
};

}  // namespace vlalab::model

#endif  // VLALAB_MODEL_CONFIG_HPP_
