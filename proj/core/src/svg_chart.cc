// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpaudit/svg_chart.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace dpaudit {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;

struct Axis {
  double lo, hi;  // log10 bounds, whole decades

  double Map(double log_value, double from, double to) const {
    return from + (log_value - lo) / (hi - lo) * (to - from);
  }
};

Axis DecadeAxis(double min_value, double max_value) {
  double lo = std::floor(std::log10(min_value));
  double hi = std::ceil(std::log10(max_value));
  if (hi <= lo) hi = lo + 1;
  return {lo, hi};
}

std::string Coord(double v) { return absl::StrFormat("%.2f", v); }

}  // namespace

std::string RegionSvg(std::span<const PrivacyRegionPoint> points) {
  std::vector<PrivacyRegionPoint> pts;
  for (const PrivacyRegionPoint& p : points) {
    if (p.status.ok() && p.sigma > 0 && std::isfinite(p.sigma)) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.sigma < b.sigma; });

  std::string svg = absl::StrFormat(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n"
      "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n",
      static_cast<int>(kWidth), static_cast<int>(kHeight),
      static_cast<int>(kWidth), static_cast<int>(kHeight));
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;
  absl::StrAppend(&svg, "<rect x=\"", Coord(x0), "\" y=\"", Coord(y1),
                  "\" width=\"", Coord(x1 - x0), "\" height=\"",
                  Coord(y0 - y1), "\" fill=\"none\" stroke=\"black\"/>\n");
  if (pts.empty()) {
    absl::StrAppend(&svg, "<text x=\"", Coord((x0 + x1) / 2), "\" y=\"",
                    Coord((y0 + y1) / 2),
                    "\" text-anchor=\"middle\">no data</text>\n</svg>\n");
    return svg;
  }

  double eps_min = std::numeric_limits<double>::infinity(), eps_max = 0;
  for (const auto& p : pts) {
    for (double e : {p.eps_lower, p.eps_upper}) {
      if (e > 0 && std::isfinite(e)) {
        eps_min = std::min(eps_min, e);
        eps_max = std::max(eps_max, e);
      }
    }
  }
  if (eps_max == 0) eps_min = eps_max = 1;
  const Axis xa = DecadeAxis(pts.front().sigma, pts.back().sigma);
  const Axis ya = DecadeAxis(eps_min, eps_max);
  auto px = [&](double sigma) { return xa.Map(std::log10(sigma), x0, x1); };
  auto py = [&](double eps) {
    if (!(eps > 0)) return y0;
    if (!std::isfinite(eps)) return y1;
    return std::clamp(ya.Map(std::log10(eps), y0, y1), y1, y0);
  };

  // Gridlines and decade labels.
  for (double d = xa.lo; d <= xa.hi; ++d) {
    const double x = xa.Map(d, x0, x1);
    absl::StrAppend(&svg, "<line x1=\"", Coord(x), "\" y1=\"", Coord(y0),
                    "\" x2=\"", Coord(x), "\" y2=\"", Coord(y1),
                    "\" stroke=\"#dddddd\"/>\n<text x=\"", Coord(x), "\" y=\"",
                    Coord(y0 + 18), "\" text-anchor=\"middle\" font-size=\"12\">",
                    absl::StrFormat("1e%d", static_cast<int>(d)), "</text>\n");
  }
  for (double d = ya.lo; d <= ya.hi; ++d) {
    const double y = ya.Map(d, y0, y1);
    absl::StrAppend(&svg, "<line x1=\"", Coord(x0), "\" y1=\"", Coord(y),
                    "\" x2=\"", Coord(x1), "\" y2=\"", Coord(y),
                    "\" stroke=\"#dddddd\"/>\n<text x=\"", Coord(x0 - 6),
                    "\" y=\"", Coord(y + 4),
                    "\" text-anchor=\"end\" font-size=\"12\">",
                    absl::StrFormat("1e%d", static_cast<int>(d)), "</text>\n");
  }
  absl::StrAppend(&svg, "<text x=\"", Coord((x0 + x1) / 2), "\" y=\"",
                  Coord(kHeight - 12),
                  "\" text-anchor=\"middle\">noise multiplier</text>\n",
                  "<text x=\"16\" y=\"", Coord((y0 + y1) / 2),
                  "\" text-anchor=\"middle\" transform=\"rotate(-90 16 ",
                  Coord((y0 + y1) / 2), ")\">epsilon</text>\n");

  std::string upper, lower, band;
  for (const auto& p : pts) {
    absl::StrAppend(&upper, Coord(px(p.sigma)), ",", Coord(py(p.eps_upper)), " ");
    absl::StrAppend(&lower, Coord(px(p.sigma)), ",", Coord(py(p.eps_lower)), " ");
  }
  band = upper;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    absl::StrAppend(&band, Coord(px(it->sigma)), ",", Coord(py(it->eps_lower)),
                    " ");
  }
  absl::StrAppend(
      &svg, "<polygon points=\"", band,
      "\" fill=\"#4a90d9\" fill-opacity=\"0.25\" stroke=\"none\"/>\n",
      "<polyline points=\"", upper,
      "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n",
      "<polyline points=\"", lower,
      "\" fill=\"none\" stroke=\"#1f618d\" stroke-width=\"2\"/>\n",
      "<text x=\"", Coord(x1 - 8), "\" y=\"", Coord(y1 + 16),
      "\" text-anchor=\"end\" font-size=\"12\" fill=\"#c0392b\">upper "
      "(analysis)</text>\n<text x=\"",
      Coord(x1 - 8), "\" y=\"", Coord(y1 + 32),
      "\" text-anchor=\"end\" font-size=\"12\" fill=\"#1f618d\">lower "
      "(attack)</text>\n</svg>\n");
  return svg;
}

}  // namespace dpaudit
