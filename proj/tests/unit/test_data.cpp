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
#include "pconf/data.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace pconf;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pconf_unit_" + name)).string();
}

std::string error_message(const std::function<void()>& fn, ErrorCode expected) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.code() == expected);
    return e.what();
  }
  FAIL("expected an exception");
  return {};
}

}  // namespace

TEST_CASE("gaussian generation is seeded and labels positives first") {
  const auto spec = GaussianSpec::isotropic(Vector::Zero(2), Vector::Constant(2, 1.0));
  const auto a = gen_gaussian_dataset(spec, 30, 20, 7);
  const auto b = gen_gaussian_dataset(spec, 30, 20, 7);
  const auto c = gen_gaussian_dataset(spec, 30, 20, 8);
  CHECK(a.rows() == 50);
  CHECK(a.count(+1) == 30);
  CHECK(a.count(-1) == 20);
  for (std::size_t i = 0; i < 30; ++i) CHECK(a.labels[i] == 1);
  CHECK(a.features == b.features);
  CHECK(a.features != c.features);
}

TEST_CASE("gaussian samples match the requested moments") {
  Matrix cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  GaussianSpec spec{Vector::Zero(2), (Vector(2) << 1.0, -2.0).finished(), cov, 0.5};
  const std::size_t n = 40000;
  const auto data = gen_gaussian_dataset(spec, 1, n, 3);
  const Matrix neg = data.features.bottomRows(static_cast<Eigen::Index>(n));
  const Vector mean = neg.colwise().mean();
  // 5 standard errors.
  CHECK(std::abs(mean[0] - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(mean[1] + 2.0) < 5.0 * std::sqrt(1.0 / n));
  const Matrix centered = neg.rowwise() - mean.transpose();
  const Matrix sample_cov = centered.transpose() * centered / static_cast<double>(n - 1);
  CHECK((sample_cov - cov).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("normal source is standard normal") {
  NormalSource src(11);
  double sum = 0, sq = 0;
  std::size_t below = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = src.next();
    sum += z;
    sq += z * z;
    if (z < -1.0) ++below;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
  CHECK(std::abs(static_cast<double>(below) / n - oracle::normal_cdf(-1.0)) < 0.005);
}

TEST_CASE("make_splits sizes and independent seeds") {
  const auto spec = GaussianSpec::isotropic(Vector::Zero(2), Vector::Constant(2, 2.0));
  SplitSpec split;
  split.n_train_pos = 10;
  split.n_train_neg = 12;
  split.n_valid_pos = 5;
  split.n_test_pos = 6;
  split.n_test_neg = 7;
  split.n_confest_pos = 8;
  split.n_confest_neg = 9;
  split.seed = 100;
  const Splits s = make_splits(spec, split);
  CHECK(s.train.rows() == 22);
  CHECK(s.valid_pos.rows() == 5);
  CHECK(s.test.rows() == 13);
  CHECK(s.conf_est.rows() == 17);
  CHECK(s.train.features == gen_gaussian_dataset(spec, 10, 12, 100).features);
  CHECK(s.test.features == gen_gaussian_dataset(spec, 6, 7, 102).features);
  split.n_valid_pos = 0;
  CHECK_THROWS_AS(make_splits(spec, split), Error);
}

TEST_CASE("spec validation") {
  GaussianSpec bad = GaussianSpec::isotropic(Vector::Zero(2), Vector::Zero(3));
  CHECK_THROWS_AS(bad.validate(), Error);
  Matrix cov(2, 2);
  cov << 1.0, 2.0, 2.0, 1.0;  // indefinite
  GaussianSpec indefinite{Vector::Zero(2), Vector::Ones(2), cov, 0.5};
  error_message([&] { gen_gaussian_dataset(indefinite, 1, 1, 0); }, ErrorCode::InvalidSpec);
  GaussianSpec prior = GaussianSpec::isotropic(Vector::Zero(2), Vector::Ones(2));
  prior.prior_pos = 1.0;
  CHECK_THROWS_AS(prior.validate(), Error);
}

TEST_CASE("true posterior agrees with the density ratio") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const Vector mp = oracle::random_vector(rng, 3);
    const Vector mn = oracle::random_vector(rng, 3);
    const Vector x = oracle::random_vector(rng, 3, 2.0);
    const auto spec = GaussianSpec::isotropic(mp, mn);
    const double pp = oracle::isotropic_density(x, mp);
    const double pn = oracle::isotropic_density(x, mn);
    CHECK(true_gaussian_posterior(x, spec) == doctest::Approx(pp / (pp + pn)).epsilon(1e-10));
  }
  // General covariance and prior, explicit inverse as the reference route.
  Matrix cov(2, 2);
  cov << 1.5, -0.4, -0.4, 0.8;
  GaussianSpec spec{(Vector(2) << 0.5, 0.0).finished(), (Vector(2) << -1.0, 1.0).finished(), cov, 0.3};
  const Matrix inv = cov.inverse();
  for (int rep = 0; rep < 20; ++rep) {
    const Vector x = oracle::random_vector(rng, 2);
    const auto q = [&](const Vector& mu) { return std::exp(-0.5 * (x - mu).dot(inv * (x - mu))); };
    const double num = 0.3 * q(spec.mu_pos);
    const double expected = num / (num + 0.7 * q(spec.mu_neg));
    CHECK(true_gaussian_posterior(x, spec) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("csv parsing: header order, BOM, blank lines") {
  const auto t = parse_csv_table("\xEF\xBB\xBF" "confidence,f1,f0\n0.5,2,1\n\n1,4,3\n");
  REQUIRE(t.features.rows() == 2);
  CHECK(t.features(0, 0) == 1.0);
  CHECK(t.features(0, 1) == 2.0);
  CHECK(t.features(1, 0) == 3.0);
  REQUIRE(t.confidence);
  CHECK((*t.confidence)[0] == 0.5);
  CHECK_FALSE(t.labels);
}

TEST_CASE("csv parse errors carry row and column context") {
  auto msg = error_message([] { parse_csv_table("f0,label\n1,1\n2,x\n", "d.csv"); }, ErrorCode::Parse);
  CHECK(msg.find("d.csv") != std::string::npos);
  CHECK(msg.find("row 3") != std::string::npos);
  CHECK(msg.find("'label'") != std::string::npos);

  msg = error_message([] { parse_csv_table("f0,label\n1,0\n"); }, ErrorCode::Parse);
  CHECK(msg.find("row 2") != std::string::npos);

  msg = error_message([] { parse_csv_table("f0,confidence\n1,0\n"); }, ErrorCode::Parse);
  CHECK(msg.find("confidence") != std::string::npos);

  msg = error_message([] { parse_csv_table("f0,f1,label\n1,1\n"); }, ErrorCode::Parse);
  CHECK(msg.find("row 2") != std::string::npos);

  error_message([] { parse_csv_table("f1,label\n1,1\n"); }, ErrorCode::Parse);
  error_message([] { parse_csv_table("f0,bogus\n1,1\n"); }, ErrorCode::Parse);
  error_message([] { parse_csv_table(""); }, ErrorCode::Parse);
  error_message([] { parse_csv_table("f0,label\nnan,1\n"); }, ErrorCode::Parse);
}

TEST_CASE("load_csv requires exactly one of label and confidence") {
  const auto both = temp_path("both.csv");
  std::ofstream(both) << "f0,label,confidence\n1,1,0.5\n";
  error_message([&] { load_csv(both); }, ErrorCode::Parse);
  const auto neither = temp_path("neither.csv");
  std::ofstream(neither) << "f0\n1\n";
  error_message([&] { load_csv(neither); }, ErrorCode::Parse);
  error_message([&] { load_csv(temp_path("missing.csv")); }, ErrorCode::Io);
  std::remove(both.c_str());
  std::remove(neither.c_str());
}

TEST_CASE("csv write/read round trip is exact") {
  std::mt19937_64 rng(9);
  LabeledDataset d{oracle::random_matrix(rng, 25, 3, 1e3), {}};
  for (int i = 0; i < 25; ++i) d.labels.push_back(i % 3 ? 1 : -1);
  const auto path = temp_path("roundtrip.csv");
  write_csv(d, path);
  const auto back = std::get<LabeledDataset>(load_csv(path));
  CHECK(back.features == d.features);
  CHECK(back.labels == d.labels);

  PconfDataset p{oracle::random_matrix(rng, 10, 2), Vector::LinSpaced(10, 0.01, 1.0)};
  write_csv(p, path);
  const auto pb = std::get<PconfDataset>(load_csv(path));
  CHECK(pb.features == p.features);
  CHECK(pb.confidence == p.confidence);
  std::remove(path.c_str());
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("dataset validation") {
  LabeledDataset d{Matrix::Zero(2, 1), {1, 0}};
  CHECK_THROWS_AS(d.validate(), Error);
  PconfDataset p{Matrix::Zero(2, 1), (Vector(2) << 0.5, 0.0).finished()};
  CHECK_THROWS_AS(p.validate(), Error);
  p.confidence[1] = 1.0;
  CHECK_NOTHROW(p.validate());
}
