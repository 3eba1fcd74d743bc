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

#include "oracles.hpp"
#include "pconf/risk.hpp"
#include "pconf/tune.hpp"

#include <doctest.h>

using namespace pconf;

namespace {

GridEntry entry(double k, double fn) { return GridEntry{k, ScorerModel{LinearModel{Vector::Constant(1, k), 0.0}}, fn, ""}; }

GridEntry failed(double k) { return GridEntry{k, std::nullopt, 0.0, "diverged"}; }

}  // namespace

TEST_CASE("zero-one loss and empirical FN rate") {
  CHECK(zero_one_loss(0.0) == 0.0);
  CHECK(zero_one_loss(-1e-9) == 1.0);
  CHECK(zero_one_loss(3.0) == 0.0);
  const LinearModel m{Vector::Constant(1, 1.0), 0.0};
  const Matrix v = (Matrix(4, 1) << -2.0, -1.0, 0.0, 1.0).finished();
  CHECK(empirical_fn_rate(m, v) == doctest::Approx(0.5));
  CHECK_THROWS_AS(empirical_fn_rate(m, Matrix(0, 1)), Error);
}

TEST_CASE("geometric grid hits the powers of two") {
  const auto g = geometric_grid(0.125, 8.0, 25);
  REQUIRE(g.size() == 25);
  CHECK(g.front() == 0.125);
  CHECK(g[12] == 1.0);
  CHECK(g.back() == 8.0);
  for (std::size_t i = 0; i < 25; ++i) CHECK(g[i] == doctest::Approx(std::pow(2.0, (static_cast<int>(i) - 12) / 4.0)));
  const auto fast = geometric_grid(0.125, 8.0, 13);
  CHECK(fast[6] == 1.0);
  CHECK(fast[1] == doctest::Approx(std::pow(2.0, -2.5)));
  CHECK(geometric_grid(1.0, 1.0, 1) == std::vector<double>{1.0});
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 3), Error);
  const auto lin = linear_grid(-0.5, 0.5, 5);
  CHECK(lin[2] == 0.0);
}

TEST_CASE("select_k minimizes the squared FN gap") {
  const std::vector<GridEntry> grid = {entry(0.5, 0.02), entry(1.0, 0.10), entry(2.0, 0.31)};
  auto r = select_k(grid, 0.12, AdjustFamily::Power);
  CHECK(r.k_star == 1.0);
  REQUIRE(r.objective_values.size() == 3);
  CHECK(r.objective_values[2].squared_error == doctest::Approx(0.19 * 0.19));
  CHECK(std::get<LinearModel>(r.model).alpha[0] == 1.0);
  r = select_k(grid, 0.0, AdjustFamily::Power);
  CHECK(r.k_star == 0.5);
}

TEST_CASE("ties go to the smallest adjustment") {
  // equal squared error on both sides of k = 1
  std::vector<GridEntry> grid = {entry(0.5, 0.1), entry(2.0, 0.1), entry(4.0, 0.1)};
  CHECK(select_k(grid, 0.1, AdjustFamily::Power).k_star == 0.5);
  grid = {entry(0.25, 0.1), entry(2.0, 0.1)};
  CHECK(select_k(grid, 0.1, AdjustFamily::Power).k_star == 2.0);
  grid = {entry(-0.3, 0.2), entry(0.1, 0.2), entry(0.2, 0.2)};
  CHECK(select_k(grid, 0.2, AdjustFamily::Additive).k_star == 0.1);
}

TEST_CASE("failed candidates are skipped, all failed is a tuning error") {
  std::vector<GridEntry> grid = {failed(0.5), entry(1.0, 0.5)};
  auto r = select_k(grid, 0.0, AdjustFamily::Power);
  CHECK(r.k_star == 1.0);
  CHECK(r.objective_values[0].failed);
  CHECK(std::isinf(r.objective_values[0].squared_error));
  grid = {failed(0.5), failed(1.0)};
  try {
    select_k(grid, 0.0, AdjustFamily::Power);
    FAIL("expected a tuning error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Tuning);
  }
}

TEST_CASE("tune_k with a singleton grid returns that k") {
  const auto spec = GaussianSpec::isotropic(Vector::Zero(2), Vector::Constant(2, 2.0));
  const auto train = gen_gaussian_dataset(spec, 100, 0, 1);
  PconfDataset pd{train.features, Vector::Constant(100, 0.7)};
  TuneConfig cfg;
  cfg.grid = {1.0};
  cfg.adam.epochs = 50;
  const Matrix valid = gen_gaussian_dataset(spec, 50, 0, 2).features;
  const TuneResult r = tune_k(pd, valid, cfg);
  CHECK(r.k_star == 1.0);
  CHECK(r.objective_values.size() == 1);
  CHECK(r.objective_values[0].fn_rate == doctest::Approx(empirical_fn_rate(r.model, valid)));
}

TEST_CASE("tune_k is the same for any thread count") {
  const auto spec = GaussianSpec::isotropic(Vector::Zero(2), Vector::Constant(2, 1.0));
  const auto train = gen_gaussian_dataset(spec, 200, 0, 3);
  PconfDataset pd{train.features, Vector(200)};
  for (Eigen::Index i = 0; i < 200; ++i) pd.confidence[i] = true_gaussian_posterior(train.features.row(i).transpose(), spec);
  TuneConfig cfg;
  cfg.phi = 0.25;
  cfg.grid = geometric_grid(0.25, 4.0, 5);
  cfg.adam.learning_rate = 1e-2;
  cfg.adam.epochs = 200;
  const Matrix valid = gen_gaussian_dataset(spec, 200, 0, 4).features;
  const TuneResult one = tune_k(pd, valid, cfg);
  cfg.threads = 3;
  const TuneResult three = tune_k(pd, valid, cfg);
  CHECK(one.k_star == three.k_star);
  for (std::size_t i = 0; i < 5; ++i) CHECK(one.objective_values[i].fn_rate == three.objective_values[i].fn_rate);
  // larger k pushes confidences down, so the FN rate grows with k
  for (std::size_t i = 1; i < 5; ++i) CHECK(one.objective_values[i].fn_rate >= one.objective_values[i - 1].fn_rate);
}

TEST_CASE("tune config validation") {
  TuneConfig cfg;
  cfg.phi = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.phi = 0.1;
  cfg.grid = {2.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.grid = {-1.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.family = AdjustFamily::Additive;
  CHECK_NOTHROW(cfg.validate());
}
