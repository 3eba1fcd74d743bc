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

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <doctest.h>

#include <random>

using namespace pconf;

TEST_CASE("accuracy and FN rate by counting") {
  const std::vector<int> y = {1, 1, 1, -1, -1};
  const std::vector<int> p = {1, -1, 1, 1, -1};
  CHECK(accuracy(p, y) == doctest::Approx(0.6));
  CHECK(fn_rate(p, y) == doctest::Approx(1.0 / 3.0));
  const LinearModel m{Vector::Constant(1, 1.0), 0.0};
  LabeledDataset d{(Matrix(4, 1) << 1.0, -1.0, -2.0, 3.0).finished(), {1, 1, -1, -1}};
  CHECK(accuracy(m, d) == doctest::Approx(0.5));
  CHECK(error_rate(m, d) == doctest::Approx(0.5));
  CHECK(fn_rate(m, d) == doctest::Approx(0.5));
}

TEST_CASE("all-positive predictor edge case") {
  const std::vector<int> y = {1, -1, 1, 1, -1, 1, -1, 1};
  const std::vector<int> p(y.size(), 1);
  CHECK_FALSE(f_measure_negative_class(p, y).has_value());
  CHECK(fn_rate(p, y) == 0.0);
  CHECK(accuracy(p, y) == doctest::Approx(5.0 / 8.0));
}

TEST_CASE("negative-class F-measure") {
  const std::vector<int> y = {-1, -1, -1, 1, 1};
  const std::vector<int> p = {-1, -1, 1, -1, 1};
  // tp 2, fp 1, fn 1
  CHECK(*f_measure_negative_class(p, y) == doctest::Approx(2.0 / 3.0));
  const std::vector<int> no_neg = {1, 1};
  CHECK_FALSE(f_measure_negative_class(std::vector<int>{-1, 1}, no_neg).has_value());
}

TEST_CASE("summaries against a two-pass computation") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(70.0, 3.0);
  std::vector<double> v(10);
  for (auto& x : v) x = g(rng);
  double mean = 0;
  for (double x : v) mean += x;
  mean /= 10;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const auto s = summarize(v);
  CHECK(s.mean == doctest::Approx(mean));
  CHECK(s.std == doctest::Approx(std::sqrt(ss / 9)));
  CHECK(summarize(std::vector<double>{4.2}).std == 0.0);
  CHECK_THROWS_AS(summarize(std::vector<double>{}), Error);
}

TEST_CASE("incomplete beta and t distribution against boost") {
  for (double a : {0.5, 1.0, 2.5, 9.0}) {
    for (double b : {0.5, 3.0, 4.5}) {
      for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) {
        CHECK(regularized_incomplete_beta(a, b, x) == doctest::Approx(boost::math::ibeta(a, b, x)).epsilon(1e-10));
      }
    }
  }
  for (double df : {1.0, 4.0, 9.0, 30.0}) {
    boost::math::students_t dist(df);
    for (double t : {-4.0, -1.3, 0.0, 0.7, 2.9}) {
      CHECK(student_t_cdf(t, df) == doctest::Approx(boost::math::cdf(dist, t)).epsilon(1e-10));
    }
    CHECK(student_t_critical(0.05, df) == doctest::Approx(boost::math::quantile(dist, 0.975)).epsilon(1e-8));
  }
  // classic table value
  CHECK(student_t_critical(0.05, 9.0) == doctest::Approx(2.262).epsilon(1e-3));
}

TEST_CASE("paired t-test against a direct computation") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> a(10), b(10);
    for (int i = 0; i < 10; ++i) {
      a[i] = 75 + g(rng);
      b[i] = 74 + g(rng);
    }
    double md = 0;
    for (int i = 0; i < 10; ++i) md += a[i] - b[i];
    md /= 10;
    double ss = 0;
    for (int i = 0; i < 10; ++i) ss += (a[i] - b[i] - md) * (a[i] - b[i] - md);
    const double t = md / std::sqrt(ss / 9 / 10);
    boost::math::students_t dist(9);
    const double p = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    const auto r = paired_t_test(a, b);
    CHECK(r.t_statistic == doctest::Approx(t).epsilon(1e-10));
    CHECK(r.p_value == doctest::Approx(p).epsilon(1e-8));
    CHECK(r.degrees_of_freedom == 9);
    CHECK(r.significant == (p < 0.05));
  }
}

TEST_CASE("t-test antisymmetry and degenerate inputs") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a(10), b(10);
    for (int i = 0; i < 10; ++i) {
      a[i] = g(rng);
      b[i] = g(rng) + 0.3;
    }
    const auto ab = paired_t_test(a, b);
    const auto ba = paired_t_test(b, a);
    CHECK(ab.t_statistic == -ba.t_statistic);
    CHECK(ab.p_value == ba.p_value);
  }
  const std::vector<double> same = {1, 2, 3};
  CHECK(paired_t_test(same, same).undefined);
  CHECK(paired_t_test(std::vector<double>{1}, std::vector<double>{2}).undefined);
  CHECK_THROWS_AS(paired_t_test(same, std::vector<double>{1, 2}), Error);
}
