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

#ifndef PCONF_PLOT_HPP
#define PCONF_PLOT_HPP

#include "pconf/data.hpp"
#include "pconf/model.hpp"

#include <string>
#include <vector>

namespace pconf {

struct NamedModel {
  std::string name;
  ScorerModel model;
};

/// Plot geometry. Data coordinates map linearly onto the inner frame.
struct PlotFrame {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  double width = 640.0, height = 640.0, margin = 40.0;

  static PlotFrame fit(const Matrix& points, double pad_fraction = 0.05);
  double to_px_x(double x) const;
  double to_px_y(double y) const;
};

/// Scatter of the test set (positives red, negatives blue) with the zero
/// level line of every linear model and a legend. Two-dimensional inputs and
/// linear models only; anything else is UnsupportedPlot.
std::string boundary_svg(const std::vector<NamedModel>& models, const LabeledDataset& test);
void plot_boundary_svg(const std::vector<NamedModel>& models, const LabeledDataset& test, const std::string& path);

}  // namespace pconf

#endif  // PCONF_PLOT_HPP
