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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace vlalab::nn {

// Dense row-major tensor. Rank-1 tensors act as a single row wherever a
// matrix view is needed (biases, patterns, scalars).
template <typename S>
struct BasicTensor {
  std::vector<std::size_t> shape;
  std::vector<S> data;

  BasicTensor() = default;

  explicit BasicTensor(std::vector<std::size_t> sh, S fill = S(0))
      : shape(std::move(sh)) {
    data.assign(numel_of(shape), fill);
  }

  static BasicTensor zeros(std::vector<std::size_t> sh) {
    return BasicTensor(std::move(sh), S(0));
  }

  static BasicTensor full(std::vector<std::size_t> sh, S v) {
    return BasicTensor(std::move(sh), v);
  }

  static BasicTensor scalar(S v) {
    BasicTensor t({1});
    t.data[0] = v;
    return t;
  }

  static BasicTensor from(std::vector<std::size_t> sh, std::vector<S> values) {
    if (numel_of(sh) != values.size()) {
      throw std::invalid_argument("tensor: shape does not match value count");
    }
    BasicTensor t;
    t.shape = std::move(sh);
    t.data = std::move(values);
    return t;
  }

  static std::size_t numel_of(const std::vector<std::size_t>& sh) {
    std::size_t n = 1;
    for (std::size_t e : sh) n *= e;
    return sh.empty() ? 0 : n;
  }

  std::size_t numel() const { return data.size(); }

  // Matrix view: rank-1 tensors are a single row.
  std::size_t rows() const {
    if (shape.empty()) return 0;
    return shape.size() >= 2 ? shape[0] : 1;
  }

  std::size_t cols() const {
    if (shape.empty()) return 0;
    return shape.size() >= 2 ? numel() / shape[0] : shape[0];
  }

  S& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  S at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  S* row_ptr(std::size_t r) { return data.data() + r * cols(); }
  const S* row_ptr(std::size_t r) const { return data.data() + r * cols(); }

  bool all_finite() const {
    for (S v : data) {
      if (!std::isfinite(static_cast<double>(v))) return false;
    }
    return true;
  }

  bool same_shape(const BasicTensor& o) const { return shape == o.shape; }
};

using Tensor = BasicTensor<float>;

template <typename D, typename Ssrc>
BasicTensor<D> tensor_cast(const BasicTensor<Ssrc>& src) {
  BasicTensor<D> out;
  out.shape = src.shape;
  out.data.resize(src.data.size());
  for (std::size_t i = 0; i < src.data.size(); ++i) {
    out.data[i] = static_cast<D>(src.data[i]);
  }
  return out;
}

}  // namespace vlalab::nn
