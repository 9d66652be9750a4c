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

#ifndef VLALAB_MODEL_BUNDLE_HPP_
#define VLALAB_MODEL_BUNDLE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vlalab/model/config.hpp"
#include "vlalab/nn/param.hpp"

namespace vlalab::model {

// Parameter group indices inside ModelBundle::groups. The split is the unit
// of freezing: a trainer freezes or updates whole groups, never single
// tensors, and frozen groups are verified bit identical before and after.
inline constexpr int kGroupPerception = 0;  // patch embed + instruction embed + fusion
inline constexpr int kGroupBackbone = 1;    // fused-feature MLP trunk
inline constexpr int kGroupActionHead = 2;  // per-step token classifiers
inline constexpr int kNumGroups = 3;

struct ModelBundle {
  ModelConfig cfg;
  std::vector<nn::ParamGroup> groups;  // fixed order: perception, backbone, action_head

  nn::ParamGroup& perception() { return groups[kGroupPerception]; }
  nn::ParamGroup& backbone() { return groups[kGroupBackbone]; }
  nn::ParamGroup& action_head() { return groups[kGroupActionHead]; }
  const nn::ParamGroup& perception() const { return groups[kGroupPerception]; }
  const nn::ParamGroup& backbone() const { return groups[kGroupBackbone]; }
  const nn::ParamGroup& action_head() const { return groups[kGroupActionHead]; }
};

// Named tensor lookup; throws std::invalid_argument when absent.
const nn::Tensor& get_tensor(const nn::ParamGroup& g, const std::string& name);
nn::Tensor& get_tensor(nn::ParamGroup& g, const std::string& name);

// Fresh weights: Xavier-uniform matrices, zero biases, small uniform
// embedding tables, and uniform +-0.05 head layers so the initial policy
// is near uniform over action tokens.
ModelBundle init_model(const ModelConfig& cfg, std::uint64_t seed);

void save_model(const ModelBundle& bundle, const std::string& path);

// Loads and validates group names, tensor names, and shapes against cfg.
ModelBundle load_model(const std::string& path, const ModelConfig& cfg = ModelConfig{});

}  // namespace vlalab::model

#endif  // VLALAB_MODEL_BUNDLE_HPP_
