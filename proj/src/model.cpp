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

#include "pconf/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pconf {

double logistic_loss(double z) {
  if (z >= 0.0) return std::log1p(std::exp(-z));
  return -z + std::log1p(std::exp(z));
}

double logistic_loss_grad(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::size_t input_dim(const ScorerModel& model) {
  return std::visit(overloaded{
                        [](const LinearModel& m) { return static_cast<std::size_t>(m.alpha.size()); },
                        [](const KernelModel& m) { return static_cast<std::size_t>(m.prototypes.cols()); },
                    },
                    model);
}

std::size_t parameter_count(const ScorerModel& model) {
  return std::visit(overloaded{
                        [](const LinearModel& m) { return static_cast<std::size_t>(m.alpha.size()) + 1; },
                        [](const KernelModel& m) { return static_cast<std::size_t>(m.coeffs.size()) + 1; },
                    },
                    model);
}

void validate(const ScorerModel& model) {
  std::visit(overloaded{
                 [](const LinearModel& m) {
                   require(m.alpha.size() >= 1, ErrorCode::InvalidSpec, "linear model needs at least one weight");
                   require(m.alpha.allFinite() && std::isfinite(m.beta), ErrorCode::InvalidSpec,
                           "non-finite linear model parameter");
                 },
                 [](const KernelModel& m) {
                   require(m.prototypes.rows() >= 1 && m.prototypes.cols() >= 1, ErrorCode::InvalidSpec,
                           "kernel model needs at least one prototype");
                   require(m.coeffs.size() == m.prototypes.rows(), ErrorCode::InvalidSpec,
                           "kernel coefficient count differs from prototype count");
                   require(std::isfinite(m.bandwidth) && m.bandwidth > 0.0, ErrorCode::InvalidSpec,
                           "kernel bandwidth must be positive");
                   require(m.prototypes.allFinite() && m.coeffs.allFinite() && std::isfinite(m.bias),
                           ErrorCode::InvalidSpec, "non-finite kernel model parameter");
                 },
             },
             model);
}

Matrix gaussian_kernel(const Matrix& a, const Matrix& b, double bandwidth) {
  require(a.cols() == b.cols(), ErrorCode::Contract, "kernel inputs differ in dimension");
  require(bandwidth > 0.0, ErrorCode::Contract, "kernel bandwidth must be positive");
  const double scale = -1.0 / (2.0 * bandwidth * bandwidth);
  Matrix k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      k(i, j) = std::exp(scale * (a.row(i) - b.row(j)).squaredNorm());
    }
  }
  return k;
}

double score(const ScorerModel& model, const Vector& x) {
  require(static_cast<std::size_t>(x.size()) == input_dim(model), ErrorCode::Contract,
          "input dimension does not match the model");
  return std::visit(overloaded{
                        [&](const LinearModel& m) { return m.alpha.dot(x) + m.beta; },
                        [&](const KernelModel& m) {
                          const double scale = -1.0 / (2.0 * m.bandwidth * m.bandwidth);
                          double s = m.bias;
                          for (Eigen::Index j = 0; j < m.prototypes.rows(); ++j) {
                            s += m.coeffs[j] * std::exp(scale * (x.transpose() - m.prototypes.row(j)).squaredNorm());
                          }
                          return s;
                        },
                    },
                    model);
}

Vector score_all(const ScorerModel& model, const Matrix& x) {
  require(static_cast<std::size_t>(x.cols()) == input_dim(model), ErrorCode::Contract,
          "input dimension does not match the model");
  return std::visit(overloaded{
                        [&](const LinearModel& m) -> Vector {
                          return (x * m.alpha).array() + m.beta;
                        },
                        [&](const KernelModel& m) -> Vector {
                          return (gaussian_kernel(x, m.prototypes, m.bandwidth) * m.coeffs).array() + m.bias;
                        },
                    },
                    model);
}

int predict(const ScorerModel& model, const Vector& x) { return sign_label(score(model, x)); }

std::vector<int> predict_all(const ScorerModel& model, const Matrix& x) {
  const Vector s = score_all(model, x);
  std::vector<int> out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = sign_label(s[i]);
  return out;
}

Vector get_parameters(const ScorerModel& model) {
  return std::visit(overloaded{
                        [](const LinearModel& m) {
                          Vector p(m.alpha.size() + 1);
                          p << m.alpha, m.beta;
                          return p;
                        },
                        [](const KernelModel& m) {
                          Vector p(m.coeffs.size() + 1);
                          p << m.coeffs, m.bias;
                          return p;
                        },
                    },
                    model);
}

void set_parameters(ScorerModel& model, const Vector& params) {
  require(static_cast<std::size_t>(params.size()) == parameter_count(model), ErrorCode::Contract,
          "parameter vector has the wrong length");
  const auto n = params.size() - 1;
  std::visit(overloaded{
                 [&](LinearModel& m) {
                   m.alpha = params.head(n);
                   m.beta = params[n];
                 },
                 [&](KernelModel& m) {
                   m.coeffs = params.head(n);
                   m.bias = params[n];
                 },
             },
             model);
}

ScorerModel make_zero_model(const ModelSpec& spec, const Matrix& train) {
  require(train.cols() >= 1, ErrorCode::Contract, "training inputs need at least one column");
  if (spec.kind == ModelKind::Linear) {
    return LinearModel{Vector::Zero(train.cols()), 0.0};
  }
  require(train.rows() >= 1, ErrorCode::Contract, "kernel model needs at least one training row");
  require(spec.bandwidth > 0.0, ErrorCode::InvalidSpec, "kernel bandwidth must be positive");
  return KernelModel{train, Vector::Zero(train.rows()), 0.0, spec.bandwidth};
}

Design::Design(const ScorerModel& model, const Matrix& x) {
  require(static_cast<std::size_t>(x.cols()) == input_dim(model), ErrorCode::Contract,
          "input dimension does not match the model");
  basis_ = std::visit(overloaded{
                          [&](const LinearModel&) -> Matrix { return x; },
                          [&](const KernelModel& m) -> Matrix {
                            return gaussian_kernel(x, m.prototypes, m.bandwidth);
                          },
                      },
                      model);
}

Vector Design::scores(const Vector& params) const {
  const auto p = basis_.cols();
  return (basis_ * params.head(p)).array() + params[p];
}

Vector Design::gradient(const Vector& dscore) const {
  Vector g(basis_.cols() + 1);
  g.head(basis_.cols()).noalias() = basis_.transpose() * dscore;
  g[basis_.cols()] = dscore.sum();
  return g;
}

// ---------------------------------------------------------------------------
// JSON persistence

namespace {

nlohmann::json vector_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const nlohmann::json& arr, const char* field) {
  if (!arr.is_array()) fail(ErrorCode::Parse, std::string("model field '") + field + "' must be an array");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail(ErrorCode::Parse, std::string("model field '") + field + "' has a non-number");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

double number_field(const nlohmann::json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_number()) {
    fail(ErrorCode::Parse, std::string("model field '") + field + "' missing or not a number");
  }
  return doc[field].get<double>();
}

}  // namespace

nlohmann::json to_json(const ScorerModel& model) {
  return std::visit(overloaded{
                        [](const LinearModel& m) {
                          return nlohmann::json{{"type", "linear"}, {"alpha", vector_json(m.alpha)}, {"beta", m.beta}};
                        },
                        [](const KernelModel& m) {
                          nlohmann::json protos = nlohmann::json::array();
                          for (Eigen::Index i = 0; i < m.prototypes.rows(); ++i) {
                            protos.push_back(vector_json(m.prototypes.row(i).transpose()));
                          }
                          return nlohmann::json{{"type", "kernel"},
                                                {"coeffs", vector_json(m.coeffs)},
                                                {"bias", m.bias},
                                                {"bandwidth", m.bandwidth},
                                                {"prototypes", protos}};
                        },
                    },
                    model);
}

ScorerModel model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) {
    fail(ErrorCode::Parse, "model document needs a string 'type' field");
  }
  const auto type = doc["type"].get<std::string>();
  ScorerModel model;
  if (type == "linear") {
    model = LinearModel{vector_from_json(doc.value("alpha", nlohmann::json()), "alpha"), number_field(doc, "beta")};
  } else if (type == "kernel") {
    KernelModel m;
    m.coeffs = vector_from_json(doc.value("coeffs", nlohmann::json()), "coeffs");
    m.bias = number_field(doc, "bias");
    m.bandwidth = number_field(doc, "bandwidth");
    const auto& protos = doc.value("prototypes", nlohmann::json());
    if (!protos.is_array() || protos.empty()) fail(ErrorCode::Parse, "model field 'prototypes' must be a non-empty array");
    const auto d = static_cast<Eigen::Index>(protos[0].size());
    m.prototypes.resize(static_cast<Eigen::Index>(protos.size()), d);
    for (std::size_t i = 0; i < protos.size(); ++i) {
      const Vector row = vector_from_json(protos[i], "prototypes");
      if (row.size() != d) fail(ErrorCode::Parse, "model prototypes differ in dimension");
      m.prototypes.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    model = std::move(m);
  } else {
    fail(ErrorCode::Parse, "unknown model type '" + type + "'");
  }
  validate(model);
  return model;
}

void save_model(const ScorerModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << to_json(model).dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

ScorerModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, path + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace pconf
