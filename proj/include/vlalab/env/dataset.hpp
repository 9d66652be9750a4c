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

#ifndef VLALAB_ENV_DATASET_HPP_
#define VLALAB_ENV_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vlalab/env/types.hpp"

namespace vlalab::env {

// One supervised frame: rendered image, tokenized instruction, expert action.
struct Sample {
  std::vector<float> image;              // kImagePixels floats in [0,1]
  std::vector<std::uint16_t> instruction;  // kInstrLen token ids
  std::vector<float> action;             // kActionDim continuous values in [-1,1]
  bool poisoned = false;                 // in-memory bookkeeping only, not serialized
};

struct Dataset {
  std::vector<Sample> samples;
};

inline constexpr char kDatasetMagic[7] = "VLADS1";  // includes trailing NUL

// Binary layout (little endian):
//   magic[6] "VLADS1", u32 H, u32 W, u32 C, u32 vocab, u32 instr_len,
//   u32 action_dim, u64 count, then per sample: f32 image[H*W*C],
//   u16 instruction[instr_len], f32 action[action_dim].
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

struct DataGenConfig {
  int episodes_per_suite = 200;
  std::uint64_t seed = 1;
};

// Episode seed stream for dataset generation; salted apart from evaluation
// seeds so training and evaluation episodes never coincide.
std::uint64_t data_episode_seed(std::uint64_t base_seed, Suite suite, int episode);

// Rolls out the scripted expert and flattens the visited (observation,
// action) pairs into supervised samples. The single-suite variant reuses the
// same per-episode seed stream, so its samples match the corresponding slice
// of the full dataset.
Dataset generate_suite_dataset(const DataGenConfig& cfg, Suite suite);
Dataset generate_dataset(const DataGenConfig& cfg);

}  // namespace vlalab::env

#endif  // VLALAB_ENV_DATASET_HPP_
