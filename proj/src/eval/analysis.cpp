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

#include "vlalab/eval/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vlalab/errors.hpp"
#include "vlalab/model/net.hpp"

namespace vlalab::eval {
namespace {

// Fused features for a list of images paired with the dataset's
// instructions, in chunks to bound tape size.
nn::Tensor features_of(const model::ModelBundle& b,
                       const std::vector<std::vector<float>>& images,
                       const env::Dataset& ds) {
  const std::size_t n = images.size();
  nn::Tensor out({n, static_cast<std::size_t>(b.cfg.feature_dim)});
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t stop = std::min(start + kChunk, n);
    const std::size_t rows = stop - start;
    nn::Tensor batch({rows, static_cast<std::size_t>(env::kImagePixels)});
    std::vector<int> instr(rows * static_cast<std::size_t>(env::kInstrLen));
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& img = images[start + r];
      std::copy(img.begin(), img.end(), batch.row_ptr(r));
      const auto& toks = ds.samples[start + r].instruction;
      for (int t = 0; t < env::kInstrLen; ++t) {
        instr[r * static_cast<std::size_t>(env::kInstrLen) +
              static_cast<std::size_t>(t)] = static_cast<int>(toks[static_cast<std::size_t>(t)]);
      }
    }
    const nn::Tensor feats = model::encode_features(b, batch, instr);
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy(feats.row_ptr(r), feats.row_ptr(r) + feats.cols(),
                out.row_ptr(start + r));
    }
  }
  return out;
}

double row_cosine(const nn::Tensor& a, const nn::Tensor& b, std::size_t r) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    const double x = a.at(r, c), y = b.at(r, c);
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na < 1e-30 && nb < 1e-30) return 1.0;  // both zero vectors coincide
  if (na < 1e-30 || nb < 1e-30) return 0.0;
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::max(-1.0, std::min(1.0, c));
}

CosineStats cosine_stats(const nn::Tensor& a, const nn::Tensor& b) {
  CosineStats out;
  double acc = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double c = row_cosine(a, b, r);
    acc += c;
    const int bin = std::clamp(
        static_cast<int>(std::floor((c + 1.0) / 2.0 * kCosineHistBins)), 0,
        kCosineHistBins - 1);
    out.hist[static_cast<std::size_t>(bin)] += 1;
  }
  out.mean = a.rows() == 0 ? 0.0 : acc / static_cast<double>(a.rows());
  return out;
}

}  // namespace

FeatureShiftReport feature_shift(const model::ModelBundle& model,
                                 const model::ModelBundle& ref_model,
                                 const attack::PairedData& data) {
  if (model.cfg.feature_dim != ref_model.cfg.feature_dim) {
    throw std::invalid_argument("models disagree on the fused feature width");
  }
  if (data.clean.samples.empty() ||
      data.triggered.size() != data.clean.samples.size()) {
    throw std::invalid_argument("paired data is empty or misaligned");
  }
  std::vector<std::vector<float>> clean_images;
  clean_images.reserve(data.clean.samples.size());
  for (const auto& s : data.clean.samples) clean_images.push_back(s.image);

  const nn::Tensor model_clean = features_of(model, clean_images, data.clean);
  const nn::Tensor model_trig = features_of(model, data.triggered, data.clean);
  const nn::Tensor ref_clean = features_of(ref_model, clean_images, data.clean);
  const nn::Tensor ref_trig = features_of(ref_model, data.triggered, data.clean);

  FeatureShiftReport rep;
  rep.samples = static_cast<int>(data.clean.samples.size());
  rep.pre = cosine_stats(ref_clean, ref_trig);
  rep.post = cosine_stats(model_clean, model_trig);
  rep.alignment = cosine_stats(model_clean, ref_clean);
  return rep;
}

FeatureShiftReport feature_shift(const model::ModelBundle& model,
                                 const model::ModelBundle& ref_model,
                                 const env::Dataset& dataset,
                                 const attack::TriggerSpec& spec) {
  return feature_shift(model, ref_model, attack::make_paired_data(dataset, spec));
}

DivergenceReport trajectory_divergence(const env::EpisodeRecord& clean_record,
                                       const env::EpisodeRecord& trig_record) {
  if (clean_record.suite != trig_record.suite ||
      clean_record.seed != trig_record.seed) {
    throw std::invalid_argument("records come from different tasks or seeds");
  }
  const auto& a = clean_record.trajectory;
  const auto& b = trig_record.trajectory;
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("records carry no trajectory");
  }

  DivergenceReport rep;
  const std::size_t steps = std::max(a.size(), b.size());
  rep.dist.resize(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const env::Vec2 pa = a[std::min(i, a.size() - 1)];
    const env::Vec2 pb = b[std::min(i, b.size() - 1)];
    rep.dist[i] = static_cast<double>(env::dist(pa, pb));
  }
  rep.first = rep.dist.front();
  rep.final = rep.dist.back();
  rep.max = *std::max_element(rep.dist.begin(), rep.dist.end());

  constexpr double kTiny = 1e-6;
  for (std::size_t i = 0; i < steps; ++i) {
    if (rep.dist[i] > kTiny) {
      rep.onset = static_cast<int>(i);
      break;
    }
  }
  if (rep.onset >= 0) {
    rep.monotone = true;
    for (std::size_t i = static_cast<std::size_t>(rep.onset) + 1; i < steps; ++i) {
      if (rep.dist[i] + kTiny < rep.dist[i - 1]) {
        rep.monotone = false;
        break;
      }
    }
  }
  return rep;
}

}  // namespace vlalab::eval
