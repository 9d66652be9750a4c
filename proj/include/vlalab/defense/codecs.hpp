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

#ifndef VLALAB_DEFENSE_CODECS_HPP_
#define VLALAB_DEFENSE_CODECS_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "vlalab/env/types.hpp"

namespace vlalab::defense {

// Standard 8x8 luminance quantization table, row major.
inline constexpr std::array<int, 64> kLuminanceTable = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

struct CompressionConfig {
  int quality = 50;  // in [1, 100]
  std::array<int, 64> table = kLuminanceTable;
};

struct NoiseConfig {
  float level = 0.0f;  // noise scale, >= 0
  std::uint64_t seed = 0;
};

// Quality-scaled table: S = (q < 50 ? 5000/q : 200 - 2q),
// entry' = clamp(floor((entry * S + 50) / 100), 1, 255). q = 50 returns the
// base table unchanged.
std::array<int, 64> scaled_quant_table(int quality, const std::array<int, 64>& base);

// Lossy stage of the compression pipeline, per channel: level shift to
// [-128, 127], 8x8 orthonormal DCT, quantize (truncation toward zero, so no
// coefficient gains magnitude), dequantize, inverse DCT, clamp to [0, 1].
// No color transform, subsampling, or entropy coding. Image dims must be
// multiples of 8.
std::vector<float> jpeg_roundtrip(const std::vector<float>& image,
                                  const CompressionConfig& cfg,
                                  int h = env::kImageH, int w = env::kImageW,
                                  int c = env::kImageC);

// image + level * N(0,1), clamped to [0, 1]. The per-image noise stream is
// derived from (cfg.seed, image bytes), so results are reproducible and
// independent of call order. level = 0 is an exact identity.
std::vector<float> gaussian_perturb(const std::vector<float>& image,
                                    const NoiseConfig& cfg);

// Peak signal-to-noise ratio in dB between two images in [0, 1] (peak = 1).
// Identical images yield +infinity.
double psnr(const std::vector<float>& a, const std::vector<float>& b);

}  // namespace vlalab::defense

#endif  // VLALAB_DEFENSE_CODECS_HPP_
