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

#include "vlalab/io/svg.hpp"

#include <algorithm>
#include <stdexcept>

#include "vlalab/io/csv.hpp"

namespace vlalab::io {
namespace {

constexpr int kPad = 24;
constexpr int kPlot = 320;

std::string num(double v) { return fmt_fixed(v, 2); }

// Workspace [0,1]^2 to pixel coordinates, y flipped so up is up.
double to_px_x(double wx) { return kPad + wx * kPlot; }
double to_px_y(double wy) { return kPad + (1.0 - wy) * kPlot; }

std::string polyline(const std::vector<env::Vec2>& pts, const std::string& color) {
  std::string s = "  <polyline fill=\"none\" stroke=\"" + color +
                  "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(to_px_x(pts[i].x)) + "," + num(to_px_y(pts[i].y));
  }
  s += "\"/>\n";
  return s;
}

std::string circle(double cx, double cy, double r, const std::string& fill,
                   const std::string& stroke) {
  return "  <circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
         "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

std::string text(double x, double y, const std::string& body, int size,
                 const std::string& anchor) {
  return "  <text x=\"" + num(x) + "\" y=\"" + num(y) +
         "\" font-family=\"monospace\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\">" + body + "</text>\n";
}

std::string header(int w, int h, const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                  std::to_string(w) + "\" height=\"" + std::to_string(h) +
                  "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
                  "\">\n";
  s += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += text(w / 2.0, 16, title, 12, "middle");
  return s;
}

}  // namespace

std::string trajectory_svg(const std::vector<env::Vec2>& clean,
                           const std::vector<env::Vec2>& triggered, env::Vec2 goal,
                           const std::string& title) {
  if (clean.empty() || triggered.empty()) {
    throw std::invalid_argument("trajectory svg needs nonempty paths");
  }
  const int side = kPlot + 2 * kPad;
  std::string s = header(side, side + 18, title);
  s += "  <rect x=\"" + std::to_string(kPad) + "\" y=\"" + std::to_string(kPad) +
       "\" width=\"" + std::to_string(kPlot) + "\" height=\"" + std::to_string(kPlot) +
       "\" fill=\"none\" stroke=\"#888\"/>\n";
  s += polyline(clean, "#1a7f37");
  s += polyline(triggered, "#c62828");
  s += circle(to_px_x(clean.front().x), to_px_y(clean.front().y), 5, "#1565c0", "none");
  s += circle(to_px_x(goal.x), to_px_y(goal.y), 5, "none", "#333");
  s += text(kPad, side + 12, "start=blue goal=ring clean=green triggered=red", 10,
            "start");
  return s + "</svg>\n";
}

std::string histogram_svg(const std::vector<std::string>& labels,
                          const std::vector<std::array<int, 20>>& hists,
                          const std::string& title) {
  if (labels.size() != hists.size() || hists.empty()) {
    throw std::invalid_argument("histogram svg needs one label per histogram");
  }
  const int panel_w = 240, panel_h = 120, gap = 24;
  const int w = kPad * 2 + static_cast<int>(hists.size()) * panel_w +
                (static_cast<int>(hists.size()) - 1) * gap;
  const int h = kPad * 2 + panel_h + 40;
  std::string s = header(w, h, title);
  for (std::size_t p = 0; p < hists.size(); ++p) {
    const double x0 = kPad + static_cast<double>(p) * (panel_w + gap);
    const double y0 = kPad + 16;
    int peak = 1;
    for (int v : hists[p]) peak = std::max(peak, v);
    s += "  <rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" +
         std::to_string(panel_w) + "\" height=\"" + std::to_string(panel_h) +
         "\" fill=\"none\" stroke=\"#888\"/>\n";
    const double bw = static_cast<double>(panel_w) / 20.0;
    for (int b = 0; b < 20; ++b) {
      const double frac =
          static_cast<double>(hists[p][static_cast<std::size_t>(b)]) / peak;
      const double bh = frac * (panel_h - 4);
      if (bh <= 0.0) continue;
      s += "  <rect x=\"" + num(x0 + b * bw + 1) + "\" y=\"" +
           num(y0 + panel_h - bh) + "\" width=\"" + num(bw - 2) + "\" height=\"" +
           num(bh) + "\" fill=\"#4a78b5\"/>\n";
    }
    s += text(x0 + panel_w / 2.0, y0 + panel_h + 14, labels[p], 10, "middle");
    s += text(x0, y0 + panel_h + 26, "-1", 9, "start");
    s += text(x0 + panel_w, y0 + panel_h + 26, "+1", 9, "end");
  }
  return s + "</svg>\n";
}

std::string grid_svg(const std::vector<std::string>& row_labels,
                     const std::vector<std::string>& col_labels,
                     const std::vector<std::vector<double>>& values,
                     const std::string& title) {
  if (values.size() != row_labels.size() || values.empty()) {
    throw std::invalid_argument("grid svg needs one value row per row label");
  }
  for (const auto& r : values) {
    if (r.size() != col_labels.size()) {
      throw std::invalid_argument("grid svg row width differs from column labels");
    }
  }
  const int cell = 72, label_w = 96, label_h = 28;
  const int w = kPad * 2 + label_w + cell * static_cast<int>(col_labels.size());
  const int h = kPad * 2 + label_h + cell * static_cast<int>(row_labels.size());
  std::string s = header(w, h, title);
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    s += text(kPad + label_w + (c + 0.5) * cell, kPad + label_h - 8, col_labels[c], 10,
              "middle");
  }
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    const double y0 = kPad + label_h + static_cast<double>(r) * cell;
    s += text(kPad + label_w - 8, y0 + cell / 2.0 + 4, row_labels[r], 10, "end");
    for (std::size_t c = 0; c < col_labels.size(); ++c) {
      const double x0 = kPad + label_w + static_cast<double>(c) * cell;
      const double v = std::clamp(values[r][c], 0.0, 100.0);
      // Light red (low) to light green (high).
      const int red = static_cast<int>(235 - v * 0.9);
      const int green = static_cast<int>(145 + v * 0.9);
      std::string fill = "rgb(" + std::to_string(red) + "," + std::to_string(green) +
                         ",150)";
      s += "  <rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" +
           std::to_string(cell) + "\" height=\"" + std::to_string(cell) + "\" fill=\"" +
           fill + "\" stroke=\"#888\"/>\n";
      s += text(x0 + cell / 2.0, y0 + cell / 2.0 + 4, fmt_fixed(values[r][c], 1), 11,
                "middle");
    }
  }
  return s + "</svg>\n";
}

}  // namespace vlalab::io
