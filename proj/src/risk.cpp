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

#include "pconf/risk.hpp"

#include <cmath>
#include <string>

namespace pconf {

namespace {

// l(z) and l(-z) from a single exp/log1p pair, accurate for either sign.
struct LossPair {
  double at_z;       // l(z)
  double at_neg_z;   // l(-z)
  double sig_neg_z;  // sigmoid(-z) = -l'(z)
};

inline LossPair loss_pair(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    const double lz = std::log1p(e);
    return {lz, z + lz, e / (1.0 + e)};
  }
  const double e = std::exp(z);
  const double lmz = std::log1p(e);
  return {lmz - z, lmz, 1.0 / (1.0 + e)};
}

}  // namespace

Vector pconf_weights(const Vector& confidence) {
  Vector w(confidence.size());
  for (Eigen::Index i = 0; i < confidence.size(); ++i) {
    const double r = confidence[i];
    if (!(r > 0.0 && r <= 1.0)) {
      fail(ErrorCode::Contract, "confidence at row " + std::to_string(i) +
                                    " outside (0, 1]; clip confidences before computing the risk");
    }
    w[i] = (1.0 - r) / r;
  }
  return w;
}

double pconf_objective(const Vector& scores, const Vector& weights, Vector* dscore) {
  require(scores.size() == weights.size(), ErrorCode::Contract, "score and weight counts differ");
  if (dscore) dscore->resize(scores.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const LossPair lp = loss_pair(scores[i]);
    total += lp.at_z + weights[i] * lp.at_neg_z;
    // d/dz [l(z) + w l(-z)] = -sigmoid(-z) + w sigmoid(z)
    if (dscore) (*dscore)[i] = -lp.sig_neg_z + weights[i] * (1.0 - lp.sig_neg_z);
  }
  return total;
}

double supervised_objective(const Vector& scores, const std::vector<int>& labels, Vector* dscore) {
  const auto n = scores.size();
  require(n >= 1, ErrorCode::Contract, "supervised risk needs at least one sample");
  require(static_cast<std::size_t>(n) == labels.size(), ErrorCode::Contract, "score and label counts differ");
  if (dscore) dscore->resize(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = labels[static_cast<std::size_t>(i)];
    const LossPair lp = loss_pair(y * scores[i]);
    total += lp.at_z;
    if (dscore) (*dscore)[i] = -y * lp.sig_neg_z * inv_n;
  }
  return total * inv_n;
}

RiskReport pconf_empirical_risk(const ScorerModel& model, const PconfDataset& data) {
  require(data.rows() == static_cast<std::size_t>(data.confidence.size()), ErrorCode::Contract,
          "feature rows and confidence values differ in count");
  RiskReport report;
  report.per_sample_weights = pconf_weights(data.confidence);
  report.objective_value = pconf_objective(score_all(model, data.features), report.per_sample_weights, nullptr);
  return report;
}

Vector pconf_risk_grad(const ScorerModel& model, const PconfDataset& data) {
  require(data.rows() == static_cast<std::size_t>(data.confidence.size()), ErrorCode::Contract,
          "feature rows and confidence values differ in count");
  const Vector weights = pconf_weights(data.confidence);
  const Design design(model, data.features);
  Vector dscore;
  pconf_objective(design.scores(get_parameters(model)), weights, &dscore);
  return design.gradient(dscore);
}

RiskValue supervised_empirical_risk(const ScorerModel& model, const LabeledDataset& data) {
  require(data.rows() >= 1, ErrorCode::Contract, "supervised risk needs at least one sample");
  data.validate();
  const Design design(model, data.features);
  Vector dscore;
  RiskValue out;
  out.value = supervised_objective(design.scores(get_parameters(model)), data.labels, &dscore);
  out.gradient = design.gradient(dscore);
  return out;
}

void ToyDistribution::validate() const {
  require(!support.empty(), ErrorCode::InvalidSpec, "toy distribution needs at least one support point");
  require(prior_pos > 0.0 && prior_pos <= 1.0, ErrorCode::InvalidSpec, "prior_pos must lie in (0, 1]");
  double sum_pos = 0.0;
  double sum_neg = 0.0;
  const auto d = support.front().x.size();
  for (const auto& p : support) {
    require(p.x.size() == d, ErrorCode::InvalidSpec, "support points differ in dimension");
    require(p.prob_pos >= 0.0 && p.prob_neg >= 0.0, ErrorCode::InvalidSpec, "negative probability mass");
    sum_pos += p.prob_pos;
    sum_neg += p.prob_neg;
  }
  require(std::abs(sum_pos - 1.0) <= 1e-12, ErrorCode::InvalidSpec, "prob_pos does not sum to one");
  require(std::abs(sum_neg - 1.0) <= 1e-12, ErrorCode::InvalidSpec, "prob_neg does not sum to one");
}

double ToyDistribution::posterior(std::size_t i) const {
  const auto& p = support.at(i);
  const double pos = prior_pos * p.prob_pos;
  const double neg = (1.0 - prior_pos) * p.prob_neg;
  if (pos + neg <= 0.0) return 0.0;
  return pos / (pos + neg);
}

double population_risk(const ScorerModel& model, const ToyDistribution& dist) {
  dist.validate();
  double total = 0.0;
  for (const auto& p : dist.support) {
    const double g = score(model, p.x);
    total += dist.prior_pos * p.prob_pos * logistic_loss(g) + (1.0 - dist.prior_pos) * p.prob_neg * logistic_loss(-g);
  }
  return total;
}

double population_pconf_risk(const ScorerModel& model, const ToyDistribution& dist) {
  dist.validate();
  double inner = 0.0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const auto& p = dist.support[i];
    if (p.prob_pos == 0.0) continue;
    const double r = dist.posterior(i);
    if (!(r > 0.0)) fail(ErrorCode::Contract, "posterior is zero at a supported positive point");
    const double g = score(model, p.x);
    inner += p.prob_pos * (logistic_loss(g) + (1.0 - r) / r * logistic_loss(-g));
  }
  return dist.prior_pos * inner;
}

TrainedModel train_pconf(const PconfDataset& data, const AdamConfig& cfg, const ModelSpec& spec) {
  data.validate();
  ScorerModel model = make_zero_model(spec, data.features);
  const Vector weights = pconf_weights(data.confidence);
  const Design design(model, data.features);
  Vector dscore;
  const auto objective = [&](const Vector& params, Vector& grad) {
    const double loss = pconf_objective(design.scores(params), weights, &dscore);
    grad = design.gradient(dscore);
    return loss;
  };
  MinimizeResult fit = minimize(objective, get_parameters(model), cfg);
  set_parameters(model, fit.params);
  return {std::move(model), std::move(fit.loss_trajectory)};
}

TrainedModel train_supervised(const LabeledDataset& data, const AdamConfig& cfg, const ModelSpec& spec) {
  require(data.rows() >= 1, ErrorCode::Contract, "supervised training needs at least one sample");
  data.validate();
  ScorerModel model = make_zero_model(spec, data.features);
  const Design design(model, data.features);
  Vector dscore;
  const auto objective = [&](const Vector& params, Vector& grad) {
    const double loss = supervised_objective(design.scores(params), data.labels, &dscore);
    grad = design.gradient(dscore);
    return loss;
  };
  MinimizeResult fit = minimize(objective, get_parameters(model), cfg);
  set_parameters(model, fit.params);
  return {std::move(model), std::move(fit.loss_trajectory)};
}

}  // namespace pconf
