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

// Independent reference computations shared by the test binaries. Nothing
// here calls into the library's numerics.

#ifndef PCONF_TESTS_ORACLES_HPP
#define PCONF_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Central differences with step h.
inline Eigen::VectorXd finite_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                         const Eigen::VectorXd& at, double h = 1e-6) {
  Eigen::VectorXd g(at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    Eigen::VectorXd plus = at, minus = at;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (f(plus) - f(minus)) / (2.0 * h);
  }
  return g;
}

/// Relative error with an absolute floor so near-zero gradients compare sanely.
inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

/// Textbook logistic loss, written directly (overflows only for |z| > ~700).
inline double naive_logistic(double z) { return std::log(1.0 + std::exp(-z)); }

/// Multivariate normal density with identity covariance.
inline double isotropic_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mu) {
  const double d = static_cast<double>(x.size());
  return std::exp(-0.5 * (x - mu).squaredNorm()) / std::pow(2.0 * M_PI, d / 2.0);
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

}  // namespace oracle

#endif  // PCONF_TESTS_ORACLES_HPP
