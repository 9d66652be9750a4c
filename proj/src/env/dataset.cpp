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

#include "vlalab/env/dataset.hpp"

#include <cstring>
#include <fstream>

#include "vlalab/env/rollout.hpp"
#include "vlalab/errors.hpp"
#include "vlalab/nn/rng.hpp"

namespace vlalab::env {
namespace {

constexpr std::uint64_t kDataSalt = 0x64617461ULL;  // "data"

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw MissingArtifact("truncated dataset: " + path);
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw MissingArtifact("truncated dataset: " + path);
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
  for (const Sample& s : ds.samples) {
    if (s.image.size() != static_cast<std::size_t>(kImagePixels) ||
        s.instruction.size() != static_cast<std::size_t>(kInstrLen) ||
        s.action.size() != static_cast<std::size_t>(kActionDim)) {
      throw std::invalid_argument("sample shape does not match dataset header");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingArtifact("cannot open for write: " + path);
  out.write(kDatasetMagic, 6);
  put_u32(out, kImageH);
  put_u32(out, kImageW);
  put_u32(out, kImageC);
  put_u32(out, kVocabSize);
  put_u32(out, kInstrLen);
  put_u32(out, kActionDim);
  put_u64(out, ds.samples.size());
  for (const Sample& s : ds.samples) {
    out.write(reinterpret_cast<const char*>(s.image.data()),
              static_cast<std::streamsize>(s.image.size() * sizeof(float)));
    out.write(reinterpret_cast<const char*>(s.instruction.data()),
              static_cast<std::streamsize>(s.instruction.size() * sizeof(std::uint16_t)));
    out.write(reinterpret_cast<const char*>(s.action.data()),
              static_cast<std::streamsize>(s.action.size() * sizeof(float)));
  }
  if (!out) throw MissingArtifact("write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact("dataset not found: " + path);
  char magic[6];
  if (!in.read(magic, 6) || std::memcmp(magic, kDatasetMagic, 6) != 0) {
    throw MissingArtifact("not a dataset file: " + path);
  }
  const std::uint32_t h = get_u32(in, path), w = get_u32(in, path), c = get_u32(in, path);
  const std::uint32_t vocab = get_u32(in, path), instr = get_u32(in, path);
  const std::uint32_t adim = get_u32(in, path);
  if (h != kImageH || w != kImageW || c != kImageC || vocab != kVocabSize ||
      instr != kInstrLen || adim != kActionDim) {
    throw MissingArtifact("dataset header mismatch: " + path);
  }
  const std::uint64_t count = get_u64(in, path);
  if (count > (1ULL << 24)) throw MissingArtifact("implausible sample count: " + path);
  Dataset ds;
  ds.samples.resize(count);
  for (Sample& s : ds.samples) {
    s.image.resize(kImagePixels);
    s.instruction.resize(kInstrLen);
    s.action.resize(kActionDim);
    in.read(reinterpret_cast<char*>(s.image.data()),
            static_cast<std::streamsize>(s.image.size() * sizeof(float)));
    in.read(reinterpret_cast<char*>(s.instruction.data()),
            static_cast<std::streamsize>(s.instruction.size() * sizeof(std::uint16_t)));
    in.read(reinterpret_cast<char*>(s.action.data()),
            static_cast<std::streamsize>(s.action.size() * sizeof(float)));
    if (!in) throw MissingArtifact("truncated dataset: " + path);
  }
  return ds;
}

std::uint64_t data_episode_seed(std::uint64_t base_seed, Suite suite, int episode) {
  return nn::Rng::mix(nn::Rng::mix(base_seed, kDataSalt),
                      static_cast<std::uint64_t>(suite),
                      static_cast<std::uint64_t>(episode));
}

Dataset generate_suite_dataset(const DataGenConfig& cfg, Suite suite) {
  if (cfg.episodes_per_suite <= 0) {
    throw ConfigError("episodes_per_suite must be positive");
  }
  Dataset ds;
  for (int ep = 0; ep < cfg.episodes_per_suite; ++ep) {
    const std::uint64_t seed = data_episode_seed(cfg.seed, suite, ep);
    EpisodeRecord rec = rollout_expert(suite, seed, /*keep_observations=*/true);
    for (std::size_t i = 0; i < rec.actions.size(); ++i) {
      Sample s;
      s.image = std::move(rec.observations[i].image);
      s.instruction = rec.observations[i].instruction;
      s.action.assign(rec.actions[i].c.begin(), rec.actions[i].c.end());
      ds.samples.push_back(std::move(s));
    }
  }
  return ds;
}

Dataset generate_dataset(const DataGenConfig& cfg) {
  Dataset ds;
  for (Suite suite : kAllSuites) {
    Dataset part = generate_suite_dataset(cfg, suite);
    for (auto& s : part.samples) ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace vlalab::env
