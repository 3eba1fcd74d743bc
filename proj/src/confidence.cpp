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

#include "pconf/confidence.hpp"

#include "pconf/risk.hpp"

#include <algorithm>
#include <cmath>

namespace pconf {

const char* to_string(AdjustFamily family) {
  return family == AdjustFamily::Power ? "power" : "additive";
}

AdjustFamily adjust_family_from_string(const std::string& name) {
  if (name == "power") return AdjustFamily::Power;
  if (name == "additive") return AdjustFamily::Additive;
  fail(ErrorCode::InvalidSpec, "unknown adjustment family '" + name + "' (expected power or additive)");
}

void AdjustmentSpec::validate() const {
  require(std::isfinite(k), ErrorCode::InvalidSpec, "adjustment k must be finite");
  if (family == AdjustFamily::Power) {
    require(k > 0.0, ErrorCode::InvalidSpec, "power adjustment needs k > 0");
  } else {
    require(k >= -1.0 && k <= 1.0, ErrorCode::InvalidSpec, "additive adjustment needs k in [-1, 1]");
  }
  require(floor > 0.0 && floor < 0.5, ErrorCode::InvalidSpec, "clipping floor must lie in (0, 0.5)");
}

void SkewSpec::validate() const {
  require(std::isfinite(exponent_b) && exponent_b > 0.0, ErrorCode::InvalidSpec, "skew exponent b must be positive");
}

double skew(double r, const SkewSpec& spec) {
  spec.validate();
  require(r > 0.0 && r <= 1.0, ErrorCode::Contract, "skew input must lie in (0, 1]");
  return std::pow(r, spec.exponent_b);
}

double clip(double r, double floor) { return std::max(r, floor); }

double adjust(double r, const AdjustmentSpec& spec) {
  spec.validate();
  require(r > 0.0 && r <= 1.0, ErrorCode::Contract, "adjust input must lie in (0, 1]");
  if (spec.family == AdjustFamily::Power) return clip(std::pow(r, spec.k), spec.floor);
  return clip(std::max(0.0, std::min(1.0, r + spec.k)), spec.floor);
}

Vector skew_all(const Vector& r, const SkewSpec& spec) {
  return r.unaryExpr([&](double v) { return skew(v, spec); });
}

Vector clip_all(const Vector& r, double floor) {
  return r.unaryExpr([&](double v) { return clip(v, floor); });
}

Vector adjust_all(const Vector& r, const AdjustmentSpec& spec) {
  return r.unaryExpr([&](double v) { return adjust(v, spec); });
}

double ConfidenceFunction::operator()(const Vector& x) const { return sigmoid(score(model_, x)); }

Vector ConfidenceFunction::evaluate(const Matrix& x) const {
  return score_all(model_, x).unaryExpr([](double s) { return sigmoid(s); });
}

ConfidenceFunction estimate_confidence(const LabeledDataset& conf_est, double l2_strength, const AdamConfig& cfg) {
  conf_est.validate();
  require(std::isfinite(l2_strength) && l2_strength >= 0.0, ErrorCode::InvalidSpec,
          "l2_strength must be non-negative");
  if (conf_est.count(+1) == 0 || conf_est.count(-1) == 0) {
    fail(ErrorCode::InvalidData, "confidence estimation needs both positive and negative samples");
  }
  ScorerModel model = LinearModel{Vector::Zero(conf_est.features.cols()), 0.0};
  const Design design(model, conf_est.features);
  const auto d = conf_est.features.cols();
  Vector dscore;
  const auto objective = [&](const Vector& params, Vector& grad) {
    double loss = supervised_objective(design.scores(params), conf_est.labels, &dscore);
    grad = design.gradient(dscore);
    loss += l2_strength * params.head(d).squaredNorm();
    grad.head(d) += 2.0 * l2_strength * params.head(d);
    return loss;
  };
  const MinimizeResult fit = minimize(objective, get_parameters(model), cfg);
  set_parameters(model, fit.params);
  return ConfidenceFunction(std::get<LinearModel>(model));
}

double confidence_from_drowsiness(int d1, int d2, int d3, double floor) {
  for (int d : {d1, d2, d3}) {
    require(d >= 1 && d <= 5, ErrorCode::InvalidData, "drowsiness scores must lie in 1..5");
  }
  const double raw = 1.0 - static_cast<double>((d1 - 1) + (d2 - 1) + (d3 - 1)) / 12.0;
  return clip(raw, floor);
}

}  // namespace pconf
