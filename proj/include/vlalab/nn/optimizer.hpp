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
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vlalab/errors.hpp"
#include "vlalab/nn/param.hpp"

namespace vlalab::nn {

// Linear warmup to the base rate, then stepwise decay.
struct LrSchedule {
  double base = 1e-3;
  int warmup = 0;       // steps of linear ramp; 0 disables
  int decay_every = 0;  // steps between decays after warmup; 0 disables
  double decay = 0.5;

  double at(int step) const {  // step is 1-based
    if (warmup > 0 && step <= warmup) {
      return base * static_cast<double>(step) / static_cast<double>(warmup);
    }
    if (decay_every > 0) {
      const int past = step - warmup - 1;
      return base * std::pow(decay, static_cast<double>(past / decay_every));
    }
    return base;
  }
};

enum class OptKind { kSgd, kAdam };

struct OptimizerConfig {
  OptKind kind = OptKind::kAdam;
  LrSchedule sched;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Single-tensor Adam update; shared by the optimizer and by the learnable
// trigger pattern, which lives outside any parameter group.
inline void adam_update(Tensor& theta, const Tensor& grad, Tensor& m, Tensor& v,
                        int t, double lr, double beta1, double beta2, double eps) {
  const double bc1 = 1.0 - std::pow(beta1, t);
  const double bc2 = 1.0 - std::pow(beta2, t);
  for (std::size_t i = 0; i < theta.data.size(); ++i) {
    const double g = static_cast<double>(grad.data[i]);
    const double mi = beta1 * static_cast<double>(m.data[i]) + (1.0 - beta1) * g;
    const double vi = beta2 * static_cast<double>(v.data[i]) + (1.0 - beta2) * g * g;
    m.data[i] = static_cast<float>(mi);
    v.data[i] = static_cast<float>(vi);
    const double mh = mi / bc1;
    const double vh = vi / bc2;
    theta.data[i] = static_cast<float>(static_cast<double>(theta.data[i]) -
                                       lr * mh / (std::sqrt(vh) + eps));
  }
}

// Applies gradient updates to every unfrozen group. Frozen groups are never
// touched, so their bytes stay bit-identical across any number of steps.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig cfg) : cfg_(cfg) {}

  void step(std::vector<ParamGroup>& groups, const GradSet& grads) {
    if (grads.size() != groups.size()) {
      throw std::invalid_argument("optimizer: gradient set does not match groups");
    }
    ensure_state(groups);
    ++step_;
    const double lr = cfg_.sched.at(step_);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      ParamGroup& group = groups[g];
      if (group.frozen) continue;
      for (std::size_t t = 0; t < group.tensors.size(); ++t) {
        const Tensor& grad = grads[g][t];
        if (grad.numel() == 0) continue;  // no gradient entry for this tensor
        Tensor& theta = group.tensor(t);
        if (grad.numel() != theta.numel()) {
          throw std::invalid_argument("optimizer: gradient shape mismatch");
        }
        if (!grad.all_finite()) {
          throw NumericError("optimizer: non-finite gradient for " + group.name);
        }
        if (cfg_.kind == OptKind::kSgd) {
          for (std::size_t i = 0; i < theta.data.size(); ++i) {
            theta.data[i] = static_cast<float>(static_cast<double>(theta.data[i]) -
                                               lr * static_cast<double>(grad.data[i]));
          }
        } else {
          adam_update(theta, grad, m_[g][t], v_[g][t], step_, lr, cfg_.beta1,
                      cfg_.beta2, cfg_.eps);
        }
      }
    }
  }

  int step_count() const { return step_; }
  const OptimizerConfig& config() const { return cfg_; }

  // Moment accessors for invariant tests.
  const Tensor& moment_m(std::size_t g, std::size_t t) const { return m_.at(g).at(t); }
  const Tensor& moment_v(std::size_t g, std::size_t t) const { return v_.at(g).at(t); }

 private:
  void ensure_state(const std::vector<ParamGroup>& groups) {
    if (!m_.empty()) return;
    m_.resize(groups.size());
    v_.resize(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      m_[g].reserve(groups[g].tensors.size());
      v_[g].reserve(groups[g].tensors.size());
      for (const auto& [name, t] : groups[g].tensors) {
        m_[g].push_back(Tensor::zeros(t.shape));
        v_[g].push_back(Tensor::zeros(t.shape));
      }
    }
  }

  OptimizerConfig cfg_;
  int step_ = 0;
  std::vector<std::vector<Tensor>> m_, v_;
};

}  // namespace vlalab::nn
