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

#include "vlalab/nn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "vlalab/errors.hpp"

namespace vlalab::nn {
namespace {

// The artifact only targets little-endian hosts; the on-disk layout is
// little-endian by construction of these helpers.
template <typename T>
void write_le(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw MissingArtifact("checkpoint: truncated file");
  return v;
}

void write_string(std::ostream& os, const std::string& s) {
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& is) {
  const auto n = read_le<std::uint32_t>(is);
  if (n > (1u << 20)) throw MissingArtifact("checkpoint: implausible name length");
  std::string s(n, '\0');
  is.read(s.data(), n);
  if (!is) throw MissingArtifact("checkpoint: truncated file");
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<ParamGroup>& groups) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw MissingArtifact("checkpoint: cannot open for write: " + path);
  os.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(groups.size()));
  for (const auto& g : groups) {
    write_string(os, g.name);
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.tensors.size()));
    for (const auto& [name, t] : g.tensors) {
      write_string(os, name);
      write_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.shape.size()));
      for (std::size_t e : t.shape) write_le<std::uint64_t>(os, e);
      os.write(reinterpret_cast<const char*>(t.data.data()),
               static_cast<std::streamsize>(t.data.size() * sizeof(float)));
    }
  }
  if (!os) throw MissingArtifact("checkpoint: write failed: " + path);
}

std::vector<ParamGroup> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingArtifact("checkpoint: not found: " + path);
  char magic[sizeof(kCheckpointMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw MissingArtifact("checkpoint: bad magic: " + path);
  }
  const auto n_groups = read_le<std::uint32_t>(is);
  std::vector<ParamGroup> groups;
  groups.reserve(n_groups);
  for (std::uint32_t g = 0; g < n_groups; ++g) {
    ParamGroup group;
    group.name = read_string(is);
    const auto n_tensors = read_le<std::uint32_t>(is);
    group.tensors.reserve(n_tensors);
    for (std::uint32_t t = 0; t < n_tensors; ++t) {
      std::string name = read_string(is);
      const auto rank = read_le<std::uint32_t>(is);
      if (rank > 8) throw MissingArtifact("checkpoint: implausible rank");
      std::vector<std::size_t> shape(rank);
      for (auto& e : shape) e = static_cast<std::size_t>(read_le<std::uint64_t>(is));
      Tensor tensor(shape);
      is.read(reinterpret_cast<char*>(tensor.data.data()),
              static_cast<std::streamsize>(tensor.data.size() * sizeof(float)));
      if (!is) throw MissingArtifact("checkpoint: truncated tensor payload");
      group.tensors.emplace_back(std::move(name), std::move(tensor));
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace vlalab::nn
