// Copyright 2026 The pconf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pconf/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <utility>

namespace pconf {

namespace {

// Figure convention: first three models blue, green, red.
constexpr std::array<const char*, 6> kLineColors = {"#1f3fbf", "#1a9641", "#d7191c",
                                                    "#7b3294", "#e66101", "#404040"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

using Point = std::pair<double, double>;

// Segment of {p : a0 p0 + a1 p1 + c = 0} inside the frame, if any.
std::optional<std::pair<Point, Point>> clip_line(double a0, double a1, double c, const PlotFrame& f) {
  std::vector<Point> hits;
  const auto add = [&](double x, double y) {
    for (const auto& h : hits) {
      if (std::abs(h.first - x) < 1e-12 && std::abs(h.second - y) < 1e-12) return;
    }
    hits.emplace_back(x, y);
  };
  if (a1 != 0.0) {
    for (double x : {f.x_min, f.x_max}) {
      const double y = -(a0 * x + c) / a1;
      if (y >= f.y_min && y <= f.y_max) add(x, y);
    }
  }
  if (a0 != 0.0) {
    for (double y : {f.y_min, f.y_max}) {
      const double x = -(a1 * y + c) / a0;
      if (x >= f.x_min && x <= f.x_max) add(x, y);
    }
  }
  if (hits.size() < 2) return std::nullopt;
  std::sort(hits.begin(), hits.end());
  return std::make_pair(hits.front(), hits.back());
}

}  // namespace

PlotFrame PlotFrame::fit(const Matrix& points, double pad_fraction) {
  require(points.cols() == 2, ErrorCode::UnsupportedPlot, "boundary plots need two-dimensional inputs");
  PlotFrame f;
  if (points.rows() == 0) return f;
  f.x_min = points.col(0).minCoeff();
  f.x_max = points.col(0).maxCoeff();
  f.y_min = points.col(1).minCoeff();
  f.y_max = points.col(1).maxCoeff();
  const double pad_x = std::max(f.x_max - f.x_min, 1e-9) * pad_fraction;
  const double pad_y = std::max(f.y_max - f.y_min, 1e-9) * pad_fraction;
  f.x_min -= pad_x;
  f.x_max += pad_x;
  f.y_min -= pad_y;
  f.y_max += pad_y;
  return f;
}

double PlotFrame::to_px_x(double x) const {
  return margin + (x - x_min) / (x_max - x_min) * (width - 2.0 * margin);
}

double PlotFrame::to_px_y(double y) const {
  return height - margin - (y - y_min) / (y_max - y_min) * (height - 2.0 * margin);
}

std::string boundary_svg(const std::vector<NamedModel>& models, const LabeledDataset& test) {
  test.validate();
  if (test.dim() != 2) fail(ErrorCode::UnsupportedPlot, "boundary plots need two-dimensional inputs");
  for (const auto& m : models) {
    if (!std::holds_alternative<LinearModel>(m.model)) {
      fail(ErrorCode::UnsupportedPlot, "model '" + m.name + "' is not linear; only linear boundaries are drawn");
    }
    if (input_dim(m.model) != 2) fail(ErrorCode::UnsupportedPlot, "model '" + m.name + "' is not two-dimensional");
  }
  const PlotFrame f = PlotFrame::fit(test.features);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(f.width) + "\" height=\"" + fmt(f.height) +
         "\" viewBox=\"0 0 " + fmt(f.width) + " " + fmt(f.height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(f.width) + "\" height=\"" + fmt(f.height) + "\" fill=\"white\"/>\n";
  svg += "<rect class=\"frame\" x=\"" + fmt(f.margin) + "\" y=\"" + fmt(f.margin) + "\" width=\"" +
         fmt(f.width - 2 * f.margin) + "\" height=\"" + fmt(f.height - 2 * f.margin) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  svg += "<g class=\"points\">\n";
  for (std::size_t i = 0; i < test.rows(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const char* color = test.labels[i] == +1 ? "#e41a1c" : "#377eb8";
    svg += "<circle cx=\"" + fmt(f.to_px_x(test.features(row, 0))) + "\" cy=\"" +
           fmt(f.to_px_y(test.features(row, 1))) + "\" r=\"2\" fill=\"" + color + "\" fill-opacity=\"0.5\"/>\n";
  }
  svg += "</g>\n";

  svg += "<g class=\"boundaries\">\n";
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& lm = std::get<LinearModel>(models[i].model);
    const char* color = kLineColors[i % kLineColors.size()];
    const auto seg = clip_line(lm.alpha[0], lm.alpha[1], lm.beta, f);
    if (!seg) continue;
    svg += "<line class=\"boundary\" data-model=\"" + escape_xml(models[i].name) + "\" x1=\"" +
           fmt(f.to_px_x(seg->first.first)) + "\" y1=\"" + fmt(f.to_px_y(seg->first.second)) + "\" x2=\"" +
           fmt(f.to_px_x(seg->second.first)) + "\" y2=\"" + fmt(f.to_px_y(seg->second.second)) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
  }
  svg += "</g>\n";

  svg += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < models.size(); ++i) {
    const double y = f.margin + 16.0 + 18.0 * static_cast<double>(i);
    const double x = f.margin + 10.0;
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x + 24) + "\" y2=\"" + fmt(y) +
           "\" stroke=\"" + kLineColors[i % kLineColors.size()] + "\" stroke-width=\"2\"/>\n";
    svg += "<text class=\"legend-entry\" x=\"" + fmt(x + 30) + "\" y=\"" + fmt(y + 4) + "\">" +
           escape_xml(models[i].name) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void plot_boundary_svg(const std::vector<NamedModel>& models, const LabeledDataset& test, const std::string& path) {
  const std::string svg = boundary_svg(models, test);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << svg;
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace pconf
