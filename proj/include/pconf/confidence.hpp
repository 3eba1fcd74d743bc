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

// Confidence estimation, skew injection, clipping and the adjustment
// families used to undo skew.

#ifndef PCONF_CONFIDENCE_HPP
#define PCONF_CONFIDENCE_HPP

#include "pconf/data.hpp"
#include "pconf/model.hpp"
#include "pconf/optim.hpp"

#include <string>

namespace pconf {

enum class AdjustFamily {
  Power,     ///< r -> r^k, k > 0
  Additive,  ///< r -> max(0, min(1, r + k)), k in [-1, 1]
};

const char* to_string(AdjustFamily family);
AdjustFamily adjust_family_from_string(const std::string& name);

struct AdjustmentSpec {
  AdjustFamily family = AdjustFamily::Power;
  double k = 1.0;
  double floor = 0.01;

  void validate() const;
};

struct SkewSpec {
  double exponent_b = 1.0;

  void validate() const;
};

inline constexpr double kDefaultFloor = 0.01;
inline constexpr double kDefaultL2Strength = 1e-4;

/// r^b.
double skew(double r, const SkewSpec& spec);
/// max(r, floor).
double clip(double r, double floor);
/// Family transform followed by clip(., floor); output in [floor, 1].
double adjust(double r, const AdjustmentSpec& spec);

Vector skew_all(const Vector& r, const SkewSpec& spec);
Vector clip_all(const Vector& r, double floor);
Vector adjust_all(const Vector& r, const AdjustmentSpec& spec);

/// x -> sigmoid(alpha . x + beta) from a fitted linear logistic model.
class ConfidenceFunction {
 public:
  explicit ConfidenceFunction(LinearModel model) : model_(std::move(model)) {}

  double operator()(const Vector& x) const;
  Vector evaluate(const Matrix& x) const;
  const LinearModel& model() const { return model_; }

 private:
  LinearModel model_;
};

/// Fits mean logistic loss + l2_strength * |alpha|^2 (bias unpenalized) with
/// Adam from zero. InvalidData when only one class is present.
ConfidenceFunction estimate_confidence(const LabeledDataset& conf_est, double l2_strength, const AdamConfig& cfg);

/// 1 - (1/12) sum_j (D_j - 1) for three 1..5 ratings, clipped at `floor`.
double confidence_from_drowsiness(int d1, int d2, int d3, double floor = kDefaultFloor);

}  // namespace pconf

#endif  // PCONF_CONFIDENCE_HPP
