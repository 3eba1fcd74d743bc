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

// Selection of the confidence adjustment k against a known positive-class
// misclassification rate phi:
//
//   k* = argmin_k ( (1/n) sum_i l01(g_k(x_i)) - phi )^2
//
// where g_k is trained on the adjusted confidences and x_i are positive
// validation samples.

#ifndef PCONF_TUNE_HPP
#define PCONF_TUNE_HPP

#include "pconf/confidence.hpp"
#include "pconf/data.hpp"
#include "pconf/model.hpp"
#include "pconf/optim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pconf {

/// 0 for z >= 0, 1 for z < 0.
double zero_one_loss(double z);

/// Fraction of rows scored negative. Contract error on an empty matrix.
double empirical_fn_rate(const ScorerModel& model, const Matrix& valid_pos);

/// `points` values spaced evenly in log space from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t points);
/// `points` values spaced evenly from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

struct TuneConfig {
  double phi = 0.0;
  std::vector<double> grid = geometric_grid(0.125, 8.0, 25);
  ModelSpec model;
  AdamConfig adam;
  AdjustFamily family = AdjustFamily::Power;
  double floor = kDefaultFloor;
  std::size_t threads = 1;

  void validate() const;
};

struct TuneCandidate {
  double k = 0.0;
  double fn_rate = 0.0;
  /// (fn_rate - phi)^2, +inf when training failed.
  double squared_error = 0.0;
  bool failed = false;
  std::string failure;
};

struct TuneResult {
  double k_star = 1.0;
  std::vector<TuneCandidate> objective_values;
  ScorerModel model;
};

/// A candidate trained once; selection against different phi values reuses
/// it.
struct GridEntry {
  double k = 0.0;
  std::optional<ScorerModel> model;  // empty when training failed
  double fn_rate = 0.0;
  std::string failure;
};

/// Trains one model per grid value on adjusted confidences and records its
/// validation FN rate. cfg.phi is ignored.
std::vector<GridEntry> evaluate_grid(const PconfDataset& train, const Matrix& valid_pos, const TuneConfig& cfg);

/// Picks the entry closest to phi in squared error. Ties go to the smallest
/// adjustment (|ln k| for power, |k| for additive). Tuning error when every
/// entry failed.
TuneResult select_k(const std::vector<GridEntry>& grid, double phi, AdjustFamily family);

/// evaluate_grid followed by select_k(cfg.phi).
TuneResult tune_k(const PconfDataset& train, const Matrix& valid_pos, const TuneConfig& cfg);

}  // namespace pconf

#endif  // PCONF_TUNE_HPP
