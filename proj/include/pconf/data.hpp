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

// Dataset types, seeded Gaussian generation and CSV ingestion.

#ifndef PCONF_DATA_HPP
#define PCONF_DATA_HPP

#include "pconf/common.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace pconf {

/// Feature rows with +1/-1 labels.
struct LabeledDataset {
  Matrix features;
  std::vector<int> labels;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t count(int label) const;

  /// Feature rows whose label equals +1.
  Matrix positives() const;

  /// Throws InvalidData when the shape, label or finiteness invariants fail.
  void validate() const;
};

/// Positive feature rows paired with their positive-class confidence.
struct PconfDataset {
  Matrix features;
  Vector confidence;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }

  /// Confidence must lie in (0, 1].
  void validate() const;
};

struct GaussianSpec {
  Vector mu_pos;
  Vector mu_neg;
  Matrix covariance;
  double prior_pos = 0.5;

  /// Identity covariance, equal priors.
  static GaussianSpec isotropic(Vector mu_pos, Vector mu_neg);

  std::size_t dim() const { return static_cast<std::size_t>(mu_pos.size()); }
  void validate() const;
};

struct SplitSpec {
  std::size_t n_train_pos = 1000;
  std::size_t n_train_neg = 1000;
  std::size_t n_valid_pos = 1000;
  std::size_t n_test_pos = 1000;
  std::size_t n_test_neg = 1000;
  std::size_t n_confest_pos = 1000;
  std::size_t n_confest_neg = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Splits {
  LabeledDataset train;
  Matrix valid_pos;
  LabeledDataset test;
  LabeledDataset conf_est;
};

/// Standard normal deviates from a seeded mt19937_64 via the Box-Muller
/// transform. Uniforms take the top 53 bits of each draw; the first uniform
/// is shifted into (0, 1] so the logarithm stays finite. Both outputs of a
/// transform are used, cosine branch first.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// n_pos rows from N(mu_pos, cov) labeled +1 followed by n_neg rows from
/// N(mu_neg, cov) labeled -1.
LabeledDataset gen_gaussian_dataset(const GaussianSpec& spec, std::size_t n_pos,
                                    std::size_t n_neg, std::uint64_t seed);

/// Seeds: train = seed, valid = seed + 1, test = seed + 2, conf_est = seed + 3.
Splits make_splits(const GaussianSpec& spec, const SplitSpec& split);

/// Exact p(y = +1 | x) for two Gaussians sharing one covariance.
double true_gaussian_posterior(const Vector& x, const GaussianSpec& spec);

/// A parsed CSV file: features always, label and confidence columns if the
/// header names them.
struct CsvTable {
  Matrix features;
  std::optional<std::vector<int>> labels;
  std::optional<Vector> confidence;
};

using AnyDataset = std::variant<LabeledDataset, PconfDataset>;

CsvTable read_csv_table(const std::string& path);
CsvTable parse_csv_table(const std::string& text, const std::string& source = "<memory>");

/// Exactly one of `label` / `confidence` must be present.
AnyDataset load_csv(const std::string& path);

void write_csv(const LabeledDataset& data, const std::string& path);
void write_csv(const PconfDataset& data, const std::string& path);
void write_csv_table(const CsvTable& table, const std::string& path);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

}  // namespace pconf

#endif  // PCONF_DATA_HPP
