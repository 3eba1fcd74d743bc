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

// Decision functions g(x) and the logistic loss.
//
// Both scorers are linear in their parameters once the input has been mapped
// through a fixed basis (the raw features for LinearModel, the kernel row
// against every prototype for KernelModel). Training code works on that basis
// through `Design`; the parameter vector is laid out as [weights..., bias].

#ifndef PCONF_MODEL_HPP
#define PCONF_MODEL_HPP

#include "pconf/common.hpp"

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace pconf {

struct LinearModel {
  Vector alpha;
  double beta = 0.0;
};

/// g(x) = sum_j coeffs_j * exp(-|x - p_j|^2 / (2 h^2)) + bias.
struct KernelModel {
  Matrix prototypes;  // m x d
  Vector coeffs;      // m
  double bias = 0.0;
  double bandwidth = 1.0;
};

using ScorerModel = std::variant<LinearModel, KernelModel>;

enum class ModelKind { Linear, Kernel };

struct ModelSpec {
  ModelKind kind = ModelKind::Linear;
  double bandwidth = 1.0;  // kernel only
};

/// log(1 + exp(-z)) without overflow for any finite z.
double logistic_loss(double z);
/// d/dz log(1 + exp(-z)) = -1 / (1 + exp(z)).
double logistic_loss_grad(double z);
double sigmoid(double z);

std::size_t input_dim(const ScorerModel& model);
std::size_t parameter_count(const ScorerModel& model);
void validate(const ScorerModel& model);

double score(const ScorerModel& model, const Vector& x);
Vector score_all(const ScorerModel& model, const Matrix& x);

/// Sign of the score with sign(0) = +1.
inline int sign_label(double s) { return s >= 0.0 ? +1 : -1; }
int predict(const ScorerModel& model, const Vector& x);
std::vector<int> predict_all(const ScorerModel& model, const Matrix& x);

Vector get_parameters(const ScorerModel& model);
void set_parameters(ScorerModel& model, const Vector& params);

/// Zero-parameter model; kernel models take every row of `train` as a
/// prototype.
ScorerModel make_zero_model(const ModelSpec& spec, const Matrix& train);

/// exp(-|a_i - b_j|^2 / (2 h^2)) for every row pair.
Matrix gaussian_kernel(const Matrix& a, const Matrix& b, double bandwidth);

/// Fixed basis of a model evaluated on one input matrix. scores(params) and
/// gradient(dscore) are the forward map and its adjoint.
class Design {
 public:
  Design(const ScorerModel& model, const Matrix& x);

  Eigen::Index rows() const { return basis_.rows(); }
  Eigen::Index parameter_count() const { return basis_.cols() + 1; }

  Vector scores(const Vector& params) const;
  /// Gradient of sum_i f(score_i) given dscore_i = f'(score_i).
  Vector gradient(const Vector& dscore) const;

 private:
  Matrix basis_;
};

nlohmann::json to_json(const ScorerModel& model);
ScorerModel model_from_json(const nlohmann::json& doc);
void save_model(const ScorerModel& model, const std::string& path);
ScorerModel load_model(const std::string& path);

}  // namespace pconf

#endif  // PCONF_MODEL_HPP
