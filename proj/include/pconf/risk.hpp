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

// Positive-confidence and supervised empirical risks, their exact population
// counterparts on finite-support distributions, and the training entry
// points.

#ifndef PCONF_RISK_HPP
#define PCONF_RISK_HPP

#include "pconf/data.hpp"
#include "pconf/model.hpp"
#include "pconf/optim.hpp"

#include <vector>

namespace pconf {

struct RiskReport {
  double objective_value = 0.0;
  /// (1 - r_i) / r_i for every sample.
  Vector per_sample_weights;
};

struct RiskValue {
  double value = 0.0;
  Vector gradient;
};

/// (1 - r) / r elementwise. Contract error unless every r lies in (0, 1].
Vector pconf_weights(const Vector& confidence);

/// sum_i [ l(s_i) + w_i l(-s_i) ] with the logistic loss, unnormalized.
/// Writes d/ds_i into `dscore` when non-null.
double pconf_objective(const Vector& scores, const Vector& weights, Vector* dscore);

/// (1/n) sum_i l(y_i s_i). Writes d/ds_i into `dscore` when non-null.
double supervised_objective(const Vector& scores, const std::vector<int>& labels, Vector* dscore);

RiskReport pconf_empirical_risk(const ScorerModel& model, const PconfDataset& data);
/// Gradient with respect to get_parameters(model).
Vector pconf_risk_grad(const ScorerModel& model, const PconfDataset& data);

/// Mean logistic loss over labeled pairs and its parameter gradient.
RiskValue supervised_empirical_risk(const ScorerModel& model, const LabeledDataset& data);

struct ToySupportPoint {
  Vector x;
  double prob_pos = 0.0;  // p(x | y = +1)
  double prob_neg = 0.0;  // p(x | y = -1)
};

/// A joint distribution over finitely many points.
struct ToyDistribution {
  std::vector<ToySupportPoint> support;
  double prior_pos = 0.5;

  /// prob_pos and prob_neg each sum to one within 1e-12; prior_pos in (0, 1].
  void validate() const;
  /// p(y = +1 | x) by Bayes' rule at support point i.
  double posterior(std::size_t i) const;
};

/// E_{p(x,y)}[ l(y g(x)) ] by enumeration.
double population_risk(const ScorerModel& model, const ToyDistribution& dist);
/// pi_+ E_+[ l(g(x)) + (1 - r(x)) / r(x) l(-g(x)) ] by enumeration.
double population_pconf_risk(const ScorerModel& model, const ToyDistribution& dist);

struct TrainedModel {
  ScorerModel model;
  std::vector<double> loss_trajectory;
};

/// Minimizes the positive-confidence risk from a zero initialization.
TrainedModel train_pconf(const PconfDataset& data, const AdamConfig& cfg, const ModelSpec& spec);
/// Minimizes the mean logistic loss from a zero initialization.
TrainedModel train_supervised(const LabeledDataset& data, const AdamConfig& cfg, const ModelSpec& spec);

}  // namespace pconf

#endif  // PCONF_RISK_HPP
