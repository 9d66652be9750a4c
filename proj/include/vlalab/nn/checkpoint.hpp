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

#include <string>
#include <vector>

#include "vlalab/nn/param.hpp"

namespace vlalab::nn {

// Binary checkpoint, little-endian throughout:
//   magic "VLACKPT1" (8 bytes)
//   u32 group_count
//   per group: u32 name_len, name bytes, u32 tensor_count,
//     per tensor: u32 name_len, name bytes, u32 rank, u64 extents[rank],
//                 f32 data[numel]
// Round trips bit-exactly. Frozen flags are runtime state, not persisted.
inline constexpr char kCheckpointMagic[8] = {'V', 'L', 'A', 'C', 'K', 'P', 'T', '1'};

void save_checkpoint(const std::string& path, const std::vector<ParamGroup>& groups);
std::vector<ParamGroup> load_checkpoint(const std::string& path);

}  // namespace vlalab::nn
