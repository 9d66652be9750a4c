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

#ifndef VLALAB_IO_SVG_HPP_
#define VLALAB_IO_SVG_HPP_

#include <array>
#include <string>
#include <vector>

#include "vlalab/env/types.hpp"

namespace vlalab::io {

// Workspace overlay of two rollouts of the same episode: one polyline per
// path, a start marker, and the goal position. Hand-emitted, deterministic.
std::string trajectory_svg(const std::vector<env::Vec2>& clean,
                           const std::vector<env::Vec2>& triggered, env::Vec2 goal,
                           const std::string& title);

// Side-by-side cosine histograms (values over [-1, 1]).
std::string histogram_svg(const std::vector<std::string>& labels,
                          const std::vector<std::array<int, 20>>& hists,
                          const std::string& title);

// Labeled value grid (rows x cols), cell color scaled by value in [0, 100].
std::string grid_svg(const std::vector<std::string>& row_labels,
                     const std::vector<std::string>& col_labels,
                     const std::vector<std::vector<double>>& values,
                     const std::string& title);

}  // namespace vlalab::io

#endif  // VLALAB_IO_SVG_HPP_
