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
#include <string>
#include <utility>
#include <vector>

#include "vlalab/nn/tensor.hpp"

namespace vlalab::nn {

// A named set of tensors that freezes and checkpoints as a unit.
struct ParamGroup {
  std::string name;
  std::vector<std::pair<std::string, Tensor>> tensors;
  bool frozen = false;

  Tensor& tensor(std::size_t i) { return tensors[i].second; }
  const Tensor& tensor(std::size_t i) const { return tensors[i].second; }
};

// Gradients aligned with a group list: grads[g][t] matches
// groups[g].tensors[t]. A zero-element tensor means "no gradient entry"
// (frozen or unused parameters).
using GradSet = std::vector<std::vector<Tensor>>;

inline std::uint64_t fnv1a64(const void* bytes, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(bytes);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t hash_tensor(const Tensor& t, std::uint64_t h = 0xcbf29ce484222325ULL) {
  h = fnv1a64(t.shape.data(), t.shape.size() * sizeof(std::size_t), h);
  return fnv1a64(t.data.data(), t.data.size() * sizeof(float), h);
}

// Bit-exact digest of a group's tensors; used to verify freeze contracts.
inline std::uint64_t hash_group(const ParamGroup& g) {
  std::uint64_t h = fnv1a64(g.name.data(), g.name.size());
  for (const auto& [name, t] : g.tensors) {
    h = fnv1a64(name.data(), name.size(), h);
    h = hash_tensor(t, h);
  }
  return h;
}

}  // namespace vlalab::nn
