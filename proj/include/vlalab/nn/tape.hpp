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

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "vlalab/errors.hpp"
#include "vlalab/nn/tensor.hpp"

namespace vlalab::nn {

// Define-by-run reverse-mode tape over dense tensors.
//
// Building an op evaluates it immediately (that evaluation is the forward
// pass and the retained node values are the activations); backward() seeds
// the scalar root with 1 and walks the tape in reverse. Templated on the
// scalar type so the identical code paths can run in float for training and
// in double for finite-difference verification.
//
// Math ops: linear, relu, tanh, softmax, cross_entropy, mean_sq_dist (MSE /
// squared-L2 family), sum_all, add, mul, scale, concat_cols, mean_pool.
// Structural data movement: embed (row gather), patches (image -> patch
// rows), place_patch (pattern -> image canvas).
template <typename S>
class BasicTape {
 public:
  struct Id {
    std::uint32_t v = kInvalid;
    bool valid() const { return v != kInvalid; }
  };

  static constexpr std::uint32_t kInvalid = 0xFFFFFFFFu;

  Id constant(BasicTensor<S> value) {
    return push(Op::kConst, {}, std::move(value), false);
  }

  Id param(BasicTensor<S> value) {
    return push(Op::kParam, {}, std::move(value), true);
  }

  // y = x * W^T + b with x:[N,I], W:[O,I], b:[O].
  Id linear(Id x, Id w, Id b) {
    const auto& xv = val(x);
    const auto& wv = val(w);
    const auto& bv = val(b);
    const std::size_t n = xv.rows(), in = xv.cols();
    const std::size_t out = wv.rows();
    if (wv.cols() != in) throw std::invalid_argument("linear: W cols != x cols");
    if (bv.numel() != out) throw std::invalid_argument("linear: bias size != W rows");
    BasicTensor<S> y({n, out});
    // Transposed weight buffer keeps the inner loop contiguous.
    std::vector<S> wt(in * out);
    for (std::size_t o = 0; o < out; ++o) {
      for (std::size_t k = 0; k < in; ++k) wt[k * out + o] = wv.data[o * in + k];
    }
    for (std::size_t r = 0; r < n; ++r) {
      S* yr = y.row_ptr(r);
      for (std::size_t o = 0; o < out; ++o) yr[o] = bv.data[o];
      const S* xr = xv.row_ptr(r);
      for (std::size_t k = 0; k < in; ++k) {
        const S a = xr[k];
        const S* wrow = wt.data() + k * out;
        for (std::size_t o = 0; o < out; ++o) yr[o] += a * wrow[o];
      }
    }
    return push(Op::kLinear, {x, w, b}, std::move(y));
  }

  Id relu(Id x) {
    BasicTensor<S> y = val(x);
    for (S& v : y.data) v = v > S(0) ? v : S(0);
    return push(Op::kRelu, {x}, std::move(y));
  }

  Id tanh_act(Id x) {
    BasicTensor<S> y = val(x);
    for (S& v : y.data) v = std::tanh(v);
    return push(Op::kTanh, {x}, std::move(y));
  }

  // Row-wise softmax.
  Id softmax(Id x) {
    const auto& xv = val(x);
    BasicTensor<S> y = xv;
    const std::size_t n = xv.rows(), k = xv.cols();
    for (std::size_t r = 0; r < n; ++r) {
      S* row = y.row_ptr(r);
      S m = row[0];
      for (std::size_t j = 1; j < k; ++j) m = row[j] > m ? row[j] : m;
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        row[j] = std::exp(row[j] - m);
        sum += static_cast<double>(row[j]);
      }
      const S inv = static_cast<S>(1.0 / sum);
      for (std::size_t j = 0; j < k; ++j) row[j] *= inv;
    }
    return push(Op::kSoftmax, {x}, std::move(y));
  }

  // Mean over rows of -log softmax(logits)[target]. Stable log-sum-exp.
  Id cross_entropy(Id logits, const std::vector<int>& targets) {
    const auto& xv = val(logits);
    const std::size_t n = xv.rows(), k = xv.cols();
    if (targets.size() != n) {
      throw std::invalid_argument("cross_entropy: target count != rows");
    }
    BasicTensor<S> probs({n, k});
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const int t = targets[r];
      if (t < 0 || static_cast<std::size_t>(t) >= k) {
        throw std::invalid_argument("cross_entropy: target out of range");
      }
      const S* row = xv.row_ptr(r);
      S m = row[0];
      for (std::size_t j = 1; j < k; ++j) m = row[j] > m ? row[j] : m;
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) sum += std::exp(static_cast<double>(row[j] - m));
      const double lse = static_cast<double>(m) + std::log(sum);
      total += lse - static_cast<double>(row[t]);
      S* prow = probs.row_ptr(r);
      for (std::size_t j = 0; j < k; ++j) {
        prow[j] = static_cast<S>(std::exp(static_cast<double>(row[j]) - lse));
      }
    }
    BasicTensor<S> y = BasicTensor<S>::scalar(static_cast<S>(total / static_cast<double>(n)));
    Id id = push(Op::kCrossEntropy, {logits}, std::move(y));
    node(id).int_args.assign(targets.begin(), targets.end());
    node(id).aux = std::move(probs);
    return id;
  }

  // a + b; b may share a's shape, be a single row of a's width, or a scalar.
  Id add(Id a, Id b) {
    const auto& av = val(a);
    const auto& bv = val(b);
    BasicTensor<S> y = av;
    if (bv.same_shape(av) || (bv.rows() == 1 && av.rows() == 1 && bv.numel() == av.numel())) {
      for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += bv.data[i];
    } else if (bv.numel() == 1) {
      for (S& v : y.data) v += bv.data[0];
    } else if (bv.rows() == 1 && bv.cols() == av.cols()) {
      for (std::size_t r = 0; r < av.rows(); ++r) {
        S* yr = y.row_ptr(r);
        for (std::size_t c = 0; c < av.cols(); ++c) yr[c] += bv.data[c];
      }
    } else {
      throw std::invalid_argument("add: incompatible shapes");
    }
    return push(Op::kAdd, {a, b}, std::move(y));
  }

  // a * b elementwise; b may be a scalar.
  Id mul(Id a, Id b) {
    const auto& av = val(a);
    const auto& bv = val(b);
    BasicTensor<S> y = av;
    if (bv.numel() == 1) {
      for (S& v : y.data) v *= bv.data[0];
    } else if (bv.same_shape(av) || bv.numel() == av.numel()) {
      for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] *= bv.data[i];
    } else {
      throw std::invalid_argument("mul: incompatible shapes");
    }
    return push(Op::kMul, {a, b}, std::move(y));
  }

  // c * x for a compile-time constant factor.
  Id scale(Id x, S c) {
    BasicTensor<S> y = val(x);
    for (S& v : y.data) v *= c;
    Id id = push(Op::kScale, {x}, std::move(y));
    node(id).scalar_arg = c;
    return id;
  }

  Id sub(Id a, Id b) { return add(a, scale(b, S(-1))); }

  Id concat_cols(Id a, Id b) {
    const auto& av = val(a);
    const auto& bv = val(b);
    if (av.rows() != bv.rows()) throw std::invalid_argument("concat: row mismatch");
    const std::size_t n = av.rows(), ca = av.cols(), cb = bv.cols();
    BasicTensor<S> y({n, ca + cb});
    for (std::size_t r = 0; r < n; ++r) {
      S* yr = y.row_ptr(r);
      const S* ar = av.row_ptr(r);
      const S* br = bv.row_ptr(r);
      for (std::size_t c = 0; c < ca; ++c) yr[c] = ar[c];
      for (std::size_t c = 0; c < cb; ++c) yr[ca + c] = br[c];
    }
    return push(Op::kConcat, {a, b}, std::move(y));
  }

  // [N*G, F] -> [N, F], mean over each group of G consecutive rows.
  Id mean_pool(Id x, std::size_t group) {
    const auto& xv = val(x);
    if (group == 0 || xv.rows() % group != 0) {
      throw std::invalid_argument("mean_pool: rows not divisible by group");
    }
    const std::size_t n = xv.rows() / group, f = xv.cols();
    BasicTensor<S> y({n, f});
    const S inv = static_cast<S>(1.0 / static_cast<double>(group));
    for (std::size_t r = 0; r < n; ++r) {
      S* yr = y.row_ptr(r);
      for (std::size_t g = 0; g < group; ++g) {
        const S* xr = xv.row_ptr(r * group + g);
        for (std::size_t c = 0; c < f; ++c) yr[c] += xr[c];
      }
      for (std::size_t c = 0; c < f; ++c) yr[c] *= inv;
    }
    Id id = push(Op::kMeanPool, {x}, std::move(y));
    node(id).int_args = {static_cast<int>(group)};
    return id;
  }

  // Row gather: out[m] = table[ids[m]]. Backward scatter-adds into the table.
  Id embed(Id table, const std::vector<int>& ids) {
    const auto& tv = val(table);
    const std::size_t v = tv.rows(), e = tv.cols();
    BasicTensor<S> y({ids.size(), e});
    for (std::size_t m = 0; m < ids.size(); ++m) {
      const int r = ids[m];
      if (r < 0 || static_cast<std::size_t>(r) >= v) {
        throw std::invalid_argument("embed: id out of range");
      }
      const S* src = tv.row_ptr(static_cast<std::size_t>(r));
      S* dst = y.row_ptr(m);
      for (std::size_t c = 0; c < e; ++c) dst[c] = src[c];
    }
    Id id = push(Op::kEmbed, {table}, std::move(y));
    node(id).int_args.assign(ids.begin(), ids.end());
    return id;
  }

  // [N, H*W*C] -> [N*P, ph*pw*C] with P = (H/ph)*(W/pw); pure gather.
  Id patches(Id images, int h, int w, int c, int ph, int pw) {
    const auto& xv = val(images);
    if (h % ph != 0 || w % pw != 0) {
      throw std::invalid_argument("patches: image not divisible by patch");
    }
    const std::size_t hwc = static_cast<std::size_t>(h) * w * c;
    if (xv.cols() != hwc) throw std::invalid_argument("patches: image size mismatch");
    const std::size_t n = xv.rows();
    const std::size_t gh = static_cast<std::size_t>(h / ph), gw = static_cast<std::size_t>(w / pw);
    const std::size_t pd = static_cast<std::size_t>(ph) * pw * c;
    BasicTensor<S> y({n * gh * gw, pd});
    for (std::size_t s = 0; s < n; ++s) {
      const S* img = xv.row_ptr(s);
      for (std::size_t pr = 0; pr < gh; ++pr) {
        for (std::size_t pc = 0; pc < gw; ++pc) {
          S* dst = y.row_ptr((s * gh + pr) * gw + pc);
          std::size_t t = 0;
          for (int yy = 0; yy < ph; ++yy) {
            const std::size_t row = pr * ph + static_cast<std::size_t>(yy);
            const S* src = img + (row * w + pc * pw) * c;
            for (int xx = 0; xx < pw * c; ++xx) dst[t++] = src[xx];
          }
        }
      }
    }
    Id id = push(Op::kPatches, {images}, std::move(y));
    node(id).int_args = {h, w, c, ph, pw};
    return id;
  }

  // Pattern [ph*pw*C] -> single image row [H*W*C], zero outside the
  // footprint at (r0, c0). Composited onto a batch via broadcast add.
  Id place_patch(Id pattern, int h, int w, int c, int r0, int c0, int ph, int pw) {
    const auto& pv = val(pattern);
    if (pv.numel() != static_cast<std::size_t>(ph) * pw * c) {
      throw std::invalid_argument("place_patch: pattern size mismatch");
    }
    if (r0 < 0 || c0 < 0 || r0 + ph > h || c0 + pw > w) {
      throw std::invalid_argument("place_patch: footprint outside image");
    }
    BasicTensor<S> y({static_cast<std::size_t>(h) * w * c});
    std::size_t t = 0;
    for (int yy = 0; yy < ph; ++yy) {
      S* dst = y.data.data() + ((static_cast<std::size_t>(r0 + yy)) * w + c0) * c;
      for (int xx = 0; xx < pw * c; ++xx) dst[xx] = pv.data[t++];
    }
    Id id = push(Op::kPlacePatch, {pattern}, std::move(y));
    node(id).int_args = {h, w, c, r0, c0, ph, pw};
    return id;
  }

  // (1/N) * sum over rows of ||a_r - b_r||^2. Scalar output.
  Id mean_sq_dist(Id a, Id b) {
    const auto& av = val(a);
    const auto& bv = val(b);
    if (!av.same_shape(bv) && av.numel() != bv.numel()) {
      throw std::invalid_argument("mean_sq_dist: shape mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < av.data.size(); ++i) {
      const double d = static_cast<double>(av.data[i]) - static_cast<double>(bv.data[i]);
      acc += d * d;
    }
    const double n = static_cast<double>(av.rows());
    return push(Op::kMeanSqDist, {a, b}, BasicTensor<S>::scalar(static_cast<S>(acc / n)));
  }

  Id sum_all(Id x) {
    const auto& xv = val(x);
    double acc = 0.0;
    for (S v : xv.data) acc += static_cast<double>(v);
    return push(Op::kSumAll, {x}, BasicTensor<S>::scalar(static_cast<S>(acc)));
  }

  const BasicTensor<S>& value(Id id) const { return val(id); }

  S scalar(Id id) const {
    const auto& v = val(id);
    if (v.numel() != 1) throw std::invalid_argument("scalar: tensor is not scalar");
    return v.data[0];
  }

  bool has_grad(Id id) const {
    return id.v < nodes_.size() && nodes_[id.v].grad.numel() > 0;
  }

  const BasicTensor<S>& grad(Id id) const {
    const Node& n = cnode(id);
    if (n.grad.numel() == 0) {
      throw std::logic_error("grad: node has no gradient entry");
    }
    return n.grad;
  }

  // Seeds d(root)=1 and accumulates gradients into every node that needs
  // them. Root must be scalar.
  void backward(Id root) {
    Node& r = node(root);
    if (r.value.numel() != 1) {
      throw std::invalid_argument("backward: root must be scalar");
    }
    for (Node& n : nodes_) {
      if (n.needs_grad) {
        n.grad = BasicTensor<S>::zeros(n.value.shape);
      } else {
        n.grad = BasicTensor<S>();
      }
    }
    if (!r.needs_grad) return;  // no parameters anywhere upstream
    r.grad.data[0] = S(1);
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      if (static_cast<std::uint32_t>(i) > root.v) continue;
      Node& n = nodes_[i];
      if (!n.needs_grad || n.grad.numel() == 0) continue;
      dispatch_backward(n);
    }
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    kConst,
    kParam,
    kLinear,
    kRelu,
    kTanh,
    kSoftmax,
    kCrossEntropy,
    kAdd,
    kMul,
    kScale,
    kConcat,
    kMeanPool,
    kEmbed,
    kPatches,
    kPlacePatch,
    kMeanSqDist,
    kSumAll,
  };

  struct Node {
    Op op;
    std::array<Id, 3> in;
    BasicTensor<S> value;
    BasicTensor<S> grad;
    BasicTensor<S> aux;  // softmax probabilities for cross-entropy
    std::vector<int> int_args;
    S scalar_arg = S(0);
    bool needs_grad = false;
  };

  std::vector<Node> nodes_;

  Node& node(Id id) { return nodes_.at(id.v); }
  const Node& cnode(Id id) const { return nodes_.at(id.v); }
  const BasicTensor<S>& val(Id id) const { return nodes_.at(id.v).value; }

  static const char* op_name(Op op) {
    switch (op) {
      case Op::kConst: return "const";
      case Op::kParam: return "param";
      case Op::kLinear: return "linear";
      case Op::kRelu: return "relu";
      case Op::kTanh: return "tanh";
      case Op::kSoftmax: return "softmax";
      case Op::kCrossEntropy: return "cross_entropy";
      case Op::kAdd: return "add";
      case Op::kMul: return "mul";
      case Op::kScale: return "scale";
      case Op::kConcat: return "concat";
      case Op::kMeanPool: return "mean_pool";
      case Op::kEmbed: return "embed";
      case Op::kPatches: return "patches";
      case Op::kPlacePatch: return "place_patch";
      case Op::kMeanSqDist: return "mean_sq_dist";
      case Op::kSumAll: return "sum_all";
    }
    return "?";
  }

  Id push(Op op, std::array<Id, 3> in, BasicTensor<S> value, bool needs = false) {
    Node n;
    n.op = op;
    n.in = in;
    n.value = std::move(value);
    n.needs_grad = needs;
    for (Id i : in) {
      if (i.valid() && nodes_.at(i.v).needs_grad) n.needs_grad = true;
    }
    if (!n.value.all_finite()) {
      throw NumericError(std::string("non-finite value after op ") + op_name(op));
    }
    nodes_.push_back(std::move(n));
    return Id{static_cast<std::uint32_t>(nodes_.size() - 1)};
  }

  BasicTensor<S>* gradp(Id id) {
    Node& n = node(id);
    return n.grad.numel() > 0 ? &n.grad : nullptr;
  }

  void dispatch_backward(Node& n) {
    const BasicTensor<S>& gy = n.grad;
    switch (n.op) {
      case Op::kConst:
      case Op::kParam:
        return;
      case Op::kLinear: {
        const auto& xv = val(n.in[0]);
        const auto& wv = val(n.in[1]);
        const std::size_t rows = xv.rows(), in = xv.cols(), out = wv.rows();
        if (auto* gx = gradp(n.in[0])) {
          for (std::size_t r = 0; r < rows; ++r) {
            const S* gyr = gy.row_ptr(r);
            S* gxr = gx->row_ptr(r);
            for (std::size_t o = 0; o < out; ++o) {
              const S a = gyr[o];
              const S* wrow = wv.row_ptr(o);
              for (std::size_t k = 0; k < in; ++k) gxr[k] += a * wrow[k];
            }
          }
        }
        if (auto* gw = gradp(n.in[1])) {
          for (std::size_t r = 0; r < rows; ++r) {
            const S* gyr = gy.row_ptr(r);
            const S* xr = xv.row_ptr(r);
            for (std::size_t o = 0; o < out; ++o) {
              const S a = gyr[o];
              S* gwr = gw->row_ptr(o);
              for (std::size_t k = 0; k < in; ++k) gwr[k] += a * xr[k];
            }
          }
        }
        if (auto* gb = gradp(n.in[2])) {
          for (std::size_t r = 0; r < rows; ++r) {
            const S* gyr = gy.row_ptr(r);
            for (std::size_t o = 0; o < out; ++o) gb->data[o] += gyr[o];
          }
        }
        return;
      }
      case Op::kRelu: {
        if (auto* gx = gradp(n.in[0])) {
          const auto& xv = val(n.in[0]);
          for (std::size_t i = 0; i < gy.data.size(); ++i) {
            if (xv.data[i] > S(0)) gx->data[i] += gy.data[i];
          }
        }
        return;
      }
      case Op::kTanh: {
        if (auto* gx = gradp(n.in[0])) {
          for (std::size_t i = 0; i < gy.data.size(); ++i) {
            gx->data[i] += gy.data[i] * (S(1) - n.value.data[i] * n.value.data[i]);
          }
        }
        return;
      }
      case Op::kSoftmax: {
        if (auto* gx = gradp(n.in[0])) {
          const std::size_t rows = n.value.rows(), k = n.value.cols();
          for (std::size_t r = 0; r < rows; ++r) {
            const S* yr = n.value.row_ptr(r);
            const S* gyr = gy.row_ptr(r);
            double dot = 0.0;
            for (std::size_t j = 0; j < k; ++j) dot += static_cast<double>(gyr[j]) * yr[j];
            S* gxr = gx->row_ptr(r);
            for (std::size_t j = 0; j < k; ++j) {
              gxr[j] += yr[j] * (gyr[j] - static_cast<S>(dot));
            }
          }
        }
        return;
      }
      case Op::kCrossEntropy: {
        if (auto* gx = gradp(n.in[0])) {
          const std::size_t rows = n.aux.rows(), k = n.aux.cols();
          const S g = gy.data[0] / static_cast<S>(rows);
          for (std::size_t r = 0; r < rows; ++r) {
            const S* pr = n.aux.row_ptr(r);
            S* gxr = gx->row_ptr(r);
            const int t = n.int_args[r];
            for (std::size_t j = 0; j < k; ++j) gxr[j] += g * pr[j];
            gxr[t] -= g;
          }
        }
        return;
      }
      case Op::kAdd: {
        if (auto* ga = gradp(n.in[0])) {
          for (std::size_t i = 0; i < gy.data.size(); ++i) ga->data[i] += gy.data[i];
        }
        if (auto* gb = gradp(n.in[1])) {
          const auto& bv = val(n.in[1]);
          if (bv.numel() == gy.numel()) {
            for (std::size_t i = 0; i < gy.data.size(); ++i) gb->data[i] += gy.data[i];
          } else if (bv.numel() == 1) {
            double acc = 0.0;
            for (S v : gy.data) acc += static_cast<double>(v);
            gb->data[0] += static_cast<S>(acc);
          } else {
            const std::size_t cols = gy.cols();
            for (std::size_t r = 0; r < gy.rows(); ++r) {
              const S* gyr = gy.row_ptr(r);
              for (std::size_t c = 0; c < cols; ++c) gb->data[c] += gyr[c];
            }
          }
        }
        return;
      }
      case Op::kMul: {
        const auto& av = val(n.in[0]);
        const auto& bv = val(n.in[1]);
        if (bv.numel() == 1) {
          if (auto* ga = gradp(n.in[0])) {
            for (std::size_t i = 0; i < gy.data.size(); ++i) ga->data[i] += gy.data[i] * bv.data[0];
          }
          if (auto* gb = gradp(n.in[1])) {
            double acc = 0.0;
            for (std::size_t i = 0; i < gy.data.size(); ++i) {
              acc += static_cast<double>(gy.data[i]) * av.data[i];
            }
            gb->data[0] += static_cast<S>(acc);
          }
        } else {
          if (auto* ga = gradp(n.in[0])) {
            for (std::size_t i = 0; i < gy.data.size(); ++i) ga->data[i] += gy.data[i] * bv.data[i];
          }
          if (auto* gb = gradp(n.in[1])) {
            for (std::size_t i = 0; i < gy.data.size(); ++i) gb->data[i] += gy.data[i] * av.data[i];
          }
        }
        return;
      }
      case Op::kScale: {
        if (auto* gx = gradp(n.in[0])) {
          for (std::size_t i = 0; i < gy.data.size(); ++i) gx->data[i] += gy.data[i] * n.scalar_arg;
        }
        return;
      }
      case Op::kConcat: {
        const std::size_t ca = val(n.in[0]).cols();
        const std::size_t cb = val(n.in[1]).cols();
        for (std::size_t r = 0; r < gy.rows(); ++r) {
          const S* gyr = gy.row_ptr(r);
          if (auto* ga = gradp(n.in[0])) {
            S* gar = ga->row_ptr(r);
            for (std::size_t c = 0; c < ca; ++c) gar[c] += gyr[c];
          }
          if (auto* gb = gradp(n.in[1])) {
            S* gbr = gb->row_ptr(r);
            for (std::size_t c = 0; c < cb; ++c) gbr[c] += gyr[ca + c];
          }
        }
        return;
      }
      case Op::kMeanPool: {
        if (auto* gx = gradp(n.in[0])) {
          const std::size_t group = static_cast<std::size_t>(n.int_args[0]);
          const std::size_t f = gy.cols();
          const S inv = static_cast<S>(1.0 / static_cast<double>(group));
          for (std::size_t r = 0; r < gy.rows(); ++r) {
            const S* gyr = gy.row_ptr(r);
            for (std::size_t g = 0; g < group; ++g) {
              S* gxr = gx->row_ptr(r * group + g);
              for (std::size_t c = 0; c < f; ++c) gxr[c] += gyr[c] * inv;
            }
          }
        }
        return;
      }
      case Op::kEmbed: {
        if (auto* gt = gradp(n.in[0])) {
          const std::size_t e = gy.cols();
          for (std::size_t m = 0; m < n.int_args.size(); ++m) {
            S* dst = gt->row_ptr(static_cast<std::size_t>(n.int_args[m]));
            const S* src = gy.row_ptr(m);
            for (std::size_t c = 0; c < e; ++c) dst[c] += src[c];
          }
        }
        return;
      }
      case Op::kPatches: {
        if (auto* gx = gradp(n.in[0])) {
          const int h = n.int_args[0], w = n.int_args[1], c = n.int_args[2];
          const int ph = n.int_args[3], pw = n.int_args[4];
          const std::size_t gh = static_cast<std::size_t>(h / ph);
          const std::size_t gw = static_cast<std::size_t>(w / pw);
          const std::size_t ns = gx->rows();
          for (std::size_t s = 0; s < ns; ++s) {
            S* img = gx->row_ptr(s);
            for (std::size_t pr = 0; pr < gh; ++pr) {
              for (std::size_t pc = 0; pc < gw; ++pc) {
                const S* src = gy.row_ptr((s * gh + pr) * gw + pc);
                std::size_t t = 0;
                for (int yy = 0; yy < ph; ++yy) {
                  const std::size_t row = pr * static_cast<std::size_t>(ph) + static_cast<std::size_t>(yy);
                  S* dst = img + (row * static_cast<std::size_t>(w) + pc * static_cast<std::size_t>(pw)) * static_cast<std::size_t>(c);
                  for (int xx = 0; xx < pw * c; ++xx) dst[xx] += src[t++];
                }
              }
            }
          }
        }
        return;
      }
      case Op::kPlacePatch: {
        if (auto* gp = gradp(n.in[0])) {
          const int w = n.int_args[1], c = n.int_args[2];
          const int r0 = n.int_args[3], c0 = n.int_args[4];
          const int ph = n.int_args[5], pw = n.int_args[6];
          std::size_t t = 0;
          for (int yy = 0; yy < ph; ++yy) {
            const S* src = gy.data.data() + ((static_cast<std::size_t>(r0 + yy)) * w + c0) * c;
            for (int xx = 0; xx < pw * c; ++xx) gp->data[t++] += src[xx];
          }
        }
        return;
      }
      case Op::kMeanSqDist: {
        const auto& av = val(n.in[0]);
        const auto& bv = val(n.in[1]);
        const S g = gy.data[0] * static_cast<S>(2.0 / static_cast<double>(av.rows()));
        if (auto* ga = gradp(n.in[0])) {
          for (std::size_t i = 0; i < av.data.size(); ++i) {
            ga->data[i] += g * (av.data[i] - bv.data[i]);
          }
        }
        if (auto* gb = gradp(n.in[1])) {
          for (std::size_t i = 0; i < av.data.size(); ++i) {
            gb->data[i] -= g * (av.data[i] - bv.data[i]);
          }
        }
        return;
      }
      case Op::kSumAll: {
        if (auto* gx = gradp(n.in[0])) {
          for (S& v : gx->data) v += gy.data[0];
        }
        return;
      }
    }
  }
};

using Tape = BasicTape<float>;

}  // namespace vlalab::nn
