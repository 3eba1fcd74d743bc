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

#include "pconf/eval.hpp"

#include <cmath>
#include <limits>

namespace pconf {

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
  require(predictions.size() == labels.size(), ErrorCode::Contract, "prediction and label counts differ");
  require(!labels.empty(), ErrorCode::Contract, "test set is empty");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double fn_rate(std::span<const int> predictions, std::span<const int> labels) {
  require(predictions.size() == labels.size(), ErrorCode::Contract, "prediction and label counts differ");
  std::size_t positives = 0;
  std::size_t missed = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != +1) continue;
    ++positives;
    missed += predictions[i] == -1 ? 1 : 0;
  }
  require(positives > 0, ErrorCode::Contract, "FN rate needs at least one positive sample");
  return static_cast<double>(missed) / static_cast<double>(positives);
}

double accuracy(const ScorerModel& model, const LabeledDataset& test) {
  require(test.rows() >= 1, ErrorCode::Contract, "test set is empty");
  return accuracy(predict_all(model, test.features), test.labels);
}

double error_rate(const ScorerModel& model, const LabeledDataset& test) {
  require(test.rows() >= 1, ErrorCode::Contract, "test set is empty");
  const auto pred = predict_all(model, test.features);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) wrong += pred[i] != test.labels[i] ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(pred.size());
}

double fn_rate(const ScorerModel& model, const LabeledDataset& test) {
  return fn_rate(predict_all(model, test.features), test.labels);
}

std::optional<double> f_measure_negative_class(std::span<const int> predictions, std::span<const int> labels) {
  require(predictions.size() == labels.size(), ErrorCode::Contract, "prediction and label counts differ");
  require(!labels.empty(), ErrorCode::Contract, "F-measure needs at least one sample");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred_neg = predictions[i] == -1;
    const bool true_neg = labels[i] == -1;
    tp += pred_neg && true_neg;
    fp += pred_neg && !true_neg;
    fn += !pred_neg && true_neg;
  }
  if (tp + fp == 0 || tp + fn == 0) return std::nullopt;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

TrialSummary summarize(std::span<const double> values) {
  require(!values.empty(), ErrorCode::Contract, "cannot summarize an empty sequence");
  TrialSummary s;
  s.values.assign(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, ErrorCode::Contract, "incomplete beta needs a, b > 0");
  require(x >= 0.0 && x <= 1.0, ErrorCode::Contract, "incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  require(df > 0.0, ErrorCode::Contract, "degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_critical(double alpha, double df) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::Contract, "alpha must lie in (0, 1)");
  const double target = 1.0 - 0.5 * alpha;
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_cdf(hi, df) < target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < target) lo = mid; else hi = mid;
  }
  return hi;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
  require(a.size() == b.size(), ErrorCode::Contract, "paired t-test needs equal-length samples");
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::Contract, "alpha must lie in (0, 1)");
  TTestResult r;
  const std::size_t n = a.size();
  if (n < 2) {
    r.undefined = true;
    return r;
  }
  r.degrees_of_freedom = n - 1;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] - b[i];
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = (a[i] - b[i]) - mean;
    ss += dev * dev;
  }
  if (ss == 0.0) {
    r.undefined = true;
    return r;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  r.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double df = static_cast<double>(r.degrees_of_freedom);
  r.p_value = 2.0 * student_t_cdf(-std::abs(r.t_statistic), df);
  r.significant = std::abs(r.t_statistic) > student_t_critical(alpha, df);
  return r;
}

}  // namespace pconf
