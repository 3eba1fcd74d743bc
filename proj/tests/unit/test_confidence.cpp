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
#include "pconf/confidence.hpp"

#include <doctest.h>

using namespace pconf;

TEST_CASE("skew, clip and adjust examples") {
  CHECK(skew(0.5, {2.0}) == doctest::Approx(0.25));
  CHECK(skew(1.0, {0.3}) == 1.0);
  CHECK(clip(0.001, 0.01) == 0.01);
  CHECK(clip(0.3, 0.01) == 0.3);
  CHECK(adjust(0.25, {AdjustFamily::Power, 0.5, 0.01}) == doctest::Approx(0.5));
  CHECK(adjust(0.05, {AdjustFamily::Power, 4.0, 0.01}) == 0.01);  // re-clipped after adjustment
  CHECK(adjust(0.3, {AdjustFamily::Additive, 0.2, 0.01}) == doctest::Approx(0.5));
  CHECK(adjust(0.9, {AdjustFamily::Additive, 0.2, 0.01}) == 1.0);
  CHECK(adjust(0.1, {AdjustFamily::Additive, -0.5, 0.01}) == 0.01);
  CHECK_THROWS_AS(skew(0.0, {2.0}), Error);
  CHECK_THROWS_AS(skew(0.5, {0.0}), Error);
  CHECK_THROWS_AS(adjust(0.5, {AdjustFamily::Power, -1.0, 0.01}), Error);
  CHECK_THROWS_AS(adjust(0.5, {AdjustFamily::Additive, 1.5, 0.01}), Error);
  CHECK_THROWS_AS(adjust(0.5, {AdjustFamily::Power, 1.0, 0.6}), Error);
}

TEST_CASE("clip is idempotent and bounded") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng);
    CHECK(clip(clip(r, 0.01), 0.01) == clip(r, 0.01));
    CHECK(clip(r, 0.01) >= 0.01);
  }
}

TEST_CASE("power adjustment preserves order before clipping") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  std::uniform_real_distribution<double> lk(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), b = u(rng), k = std::exp(lk(rng));
    CHECK((a <= b) == (std::pow(a, k) <= std::pow(b, k)));
    // after clipping only weak order survives
    if (a <= b) CHECK(adjust(a, {AdjustFamily::Power, k, 0.01}) <= adjust(b, {AdjustFamily::Power, k, 0.01}));
  }
}

TEST_CASE("adjusting by 1/b undoes the skew") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  std::uniform_real_distribution<double> lb(std::log(0.2), std::log(5.0));
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng), b = std::exp(lb(rng));
    CHECK(std::abs(adjust(skew(r, {b}), {AdjustFamily::Power, 1.0 / b, 0.01}) - clip(r, 0.01)) <= 1e-12);
  }
}

TEST_CASE("drowsiness mapping") {
  CHECK(confidence_from_drowsiness(1, 1, 1) == 1.0);
  CHECK(confidence_from_drowsiness(5, 5, 5) == 0.01);
  CHECK(confidence_from_drowsiness(3, 3, 3) == doctest::Approx(0.5));
  CHECK(confidence_from_drowsiness(2, 1, 1) == doctest::Approx(11.0 / 12.0));
  CHECK(confidence_from_drowsiness(5, 5, 5, 0.05) == 0.05);
  CHECK_THROWS_AS(confidence_from_drowsiness(0, 1, 1), Error);
  CHECK_THROWS_AS(confidence_from_drowsiness(1, 6, 1), Error);
}

TEST_CASE("family names") {
  CHECK(adjust_family_from_string("power") == AdjustFamily::Power);
  CHECK(adjust_family_from_string("additive") == AdjustFamily::Additive);
  CHECK(std::string(to_string(AdjustFamily::Additive)) == "additive");
  CHECK_THROWS_AS(adjust_family_from_string("square"), Error);
}

TEST_CASE("estimated confidence approaches the true posterior") {
  const auto spec = GaussianSpec::isotropic(Vector::Zero(2), Vector::Constant(2, 1.5));
  const auto est = gen_gaussian_dataset(spec, 5000, 5000, 4);
  AdamConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.epochs = 3000;
  const ConfidenceFunction conf = estimate_confidence(est, kDefaultL2Strength, cfg);
  const auto probe = gen_gaussian_dataset(spec, 200, 200, 5);
  const Vector r = conf.evaluate(probe.features);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const Vector x = probe.features.row(i).transpose();
    worst = std::max(worst, std::abs(r[i] - true_gaussian_posterior(x, spec)));
    CHECK(conf(x) == doctest::Approx(r[i]));
  }
  CHECK(worst < 0.05);
}

TEST_CASE("confidence estimation needs both classes") {
  LabeledDataset one{Matrix::Ones(3, 2), {1, 1, 1}};
  CHECK_THROWS_AS(estimate_confidence(one, 0.0, AdamConfig{}), Error);
}
