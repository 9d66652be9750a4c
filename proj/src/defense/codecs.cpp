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

#include "vlalab/defense/codecs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlalab/errors.hpp"
#include "vlalab/nn/param.hpp"
#include "vlalab/nn/rng.hpp"

namespace vlalab::defense {
namespace {

constexpr int kBlock = 8;

// Orthonormal 8-point DCT-II basis: M[u][x] = c(u) cos((2x+1) u pi / 16).
struct DctBasis {
  double m[kBlock][kBlock];
  DctBasis() {
    const double pi = std::acos(-1.0);
    for (int u = 0; u < kBlock; ++u) {
      const double cu = u == 0 ? std::sqrt(1.0 / kBlock) : std::sqrt(2.0 / kBlock);
      for (int x = 0; x < kBlock; ++x) {
        m[u][x] = cu * std::cos((2 * x + 1) * u * pi / (2.0 * kBlock));
      }
    }
  }
};

const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

// out = M * in * M^T (forward) or M^T * in * M (inverse).
void transform_block(const double in[kBlock][kBlock], double out[kBlock][kBlock],
                     bool forward) {
  const auto& M = basis().m;
  double tmp[kBlock][kBlock];
  for (int i = 0; i < kBlock; ++i) {
    for (int j = 0; j < kBlock; ++j) {
      double acc = 0.0;
      for (int k = 0; k < kBlock; ++k) {
        acc += (forward ? M[i][k] : M[k][i]) * in[k][j];
      }
      tmp[i][j] = acc;
    }
  }
  for (int i = 0; i < kBlock; ++i) {
    for (int j = 0; j < kBlock; ++j) {
      double acc = 0.0;
      for (int k = 0; k < kBlock; ++k) {
        acc += tmp[i][k] * (forward ? M[j][k] : M[k][j]);
      }
      out[i][j] = acc;
    }
  }
}

}  // namespace

std::array<int, 64> scaled_quant_table(int quality, const std::array<int, 64>& base) {
  if (quality < 1 || quality > 100) {
    throw ConfigError("compression quality must lie in [1, 100]");
  }
  for (int e : base) {
    if (e < 1 || e > 255) {
      throw ConfigError("quantization table entries must lie in [1, 255]");
    }
  }
  const double s = quality < 50 ? 5000.0 / quality : 200.0 - 2.0 * quality;
  std::array<int, 64> out{};
  for (int i = 0; i < 64; ++i) {
    const int v = static_cast<int>(std::floor((base[static_cast<std::size_t>(i)] * s + 50.0) / 100.0));
    out[static_cast<std::size_t>(i)] = std::clamp(v, 1, 255);
  }
  return out;
}

std::vector<float> jpeg_roundtrip(const std::vector<float>& image,
                                  const CompressionConfig& cfg, int h, int w, int c) {
  if (h % kBlock != 0 || w % kBlock != 0) {
    throw std::invalid_argument("image dims must be multiples of 8");
  }
  if (image.size() != static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                          static_cast<std::size_t>(c)) {
    throw std::invalid_argument("image size does not match dims");
  }
  const std::array<int, 64> q = scaled_quant_table(cfg.quality, cfg.table);

  std::vector<float> out(image.size());
  double block[kBlock][kBlock];
  double freq[kBlock][kBlock];
  for (int ch = 0; ch < c; ++ch) {
    for (int by = 0; by < h; by += kBlock) {
      for (int bx = 0; bx < w; bx += kBlock) {
        for (int y = 0; y < kBlock; ++y) {
          for (int x = 0; x < kBlock; ++x) {
            const std::size_t i =
                (static_cast<std::size_t>(by + y) * static_cast<std::size_t>(w) +
                 static_cast<std::size_t>(bx + x)) *
                    static_cast<std::size_t>(c) +
                static_cast<std::size_t>(ch);
            block[y][x] = static_cast<double>(image[i]) * 255.0 - 128.0;
          }
        }
        transform_block(block, freq, /*forward=*/true);
        for (int u = 0; u < kBlock; ++u) {
          for (int v = 0; v < kBlock; ++v) {
            const double step = static_cast<double>(q[static_cast<std::size_t>(u * kBlock + v)]);
            // Truncation toward zero keeps |reconstructed| <= |original|.
            freq[u][v] = std::trunc(freq[u][v] / step) * step;
          }
        }
        transform_block(freq, block, /*forward=*/false);
        for (int y = 0; y < kBlock; ++y) {
          for (int x = 0; x < kBlock; ++x) {
            const std::size_t i =
                (static_cast<std::size_t>(by + y) * static_cast<std::size_t>(w) +
                 static_cast<std::size_t>(bx + x)) *
                    static_cast<std::size_t>(c) +
                static_cast<std::size_t>(ch);
            const double v = (block[y][x] + 128.0) / 255.0;
            out[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
          }
        }
      }
    }
  }
  return out;
}

std::vector<float> gaussian_perturb(const std::vector<float>& image,
                                    const NoiseConfig& cfg) {
  if (cfg.level < 0.0f) throw ConfigError("noise level must be nonnegative");
  if (cfg.level == 0.0f) return image;
  const std::uint64_t content =
      nn::fnv1a64(image.data(), image.size() * sizeof(float));
  nn::Rng rng(nn::Rng::mix(cfg.seed, content));
  std::vector<float> out(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double v = static_cast<double>(image[i]) +
                     static_cast<double>(cfg.level) * rng.normal();
    out[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return out;
}

double psnr(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("psnr needs two images of equal nonzero size");
  }
  double mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    mse += d * d;
  }
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace vlalab::defense
