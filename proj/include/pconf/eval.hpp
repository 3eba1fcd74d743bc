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

// Classification metrics, trial aggregation and the paired t-test.

#ifndef PCONF_EVAL_HPP
#define PCONF_EVAL_HPP

#include "pconf/data.hpp"
#include "pconf/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace pconf {

double accuracy(const ScorerModel& model, const LabeledDataset& test);
double error_rate(const ScorerModel& model, const LabeledDataset& test);
/// Fraction of +1 rows predicted -1. Contract error without positives.
double fn_rate(const ScorerModel& model, const LabeledDataset& test);

double accuracy(std::span<const int> predictions, std::span<const int> labels);
double fn_rate(std::span<const int> predictions, std::span<const int> labels);

/// F-measure of the -1 class. Empty when there is no -1 prediction or no -1
/// label (precision or recall would be 0/0).
std::optional<double> f_measure_negative_class(std::span<const int> predictions, std::span<const int> labels);

struct TrialSummary {
  std::vector<double> values;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

TrialSummary summarize(std::span<const double> values);

struct TTestResult {
  double t_statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;  // two-sided
  bool significant = false;
  /// Fewer than two pairs or zero-variance differences.
  bool undefined = false;
};

/// Two-sided paired t-test on a - b.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// Regularized incomplete beta I_x(a, b) (continued fraction, relative
/// accuracy ~1e-14).
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
/// Smallest t with P(|T| > t) <= alpha, by bisection on the CDF.
double student_t_critical(double alpha, double df);

}  // namespace pconf

#endif  // PCONF_EVAL_HPP
