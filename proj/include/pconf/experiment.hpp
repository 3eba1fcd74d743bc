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

// Synthetic Gaussian experiment drivers.
//
// Every trial draws four splits (train, positive-only validation, test,
// confidence-estimation) from two unit-covariance Gaussians. A linear
// logistic model fitted on the estimation split supplies the confidence of
// the training positives, which is then skewed by r -> r^b and clipped.
// Per (mu_neg, b, trial) the driver trains original Pconf (k = 1), adjusted
// Pconf (k selected against phi) and reuses the supervised baseline of that
// (mu_neg, trial).
//
// phi-hat for a mean setting is the supervised FN rate on the test split,
// averaged over trials, computed in a first pass before any tuning.

#ifndef PCONF_EXPERIMENT_HPP
#define PCONF_EXPERIMENT_HPP

#include "pconf/confidence.hpp"
#include "pconf/data.hpp"
#include "pconf/eval.hpp"
#include "pconf/model.hpp"
#include "pconf/optim.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pconf {

struct ExperimentConfig {
  Vector mu_pos = Vector::Zero(2);
  std::vector<Vector> mu_neg_list;
  std::vector<double> b_list;
  /// phi multipliers (phi-error experiment only).
  std::vector<double> c_list;
  std::size_t trials = 10;
  /// Counts per split; `seed` is the master seed.
  SplitSpec split;
  AdamConfig adam;
  double l2_strength = kDefaultL2Strength;
  double floor = kDefaultFloor;
  ModelSpec model;
  AdjustFamily family = AdjustFamily::Power;
  double k_grid_min = 0.125;
  double k_grid_max = 8.0;
  std::size_t k_grid_points = 25;
  /// Worker threads for trial cells; 0 = hardware concurrency.
  std::size_t threads = 1;

  void validate() const;
  /// Geometric for the power family, evenly spaced for the additive one.
  std::vector<double> k_grid() const;
};

/// Full preset: 5,000 epochs and a 25-point grid. Fast: 2,500 epochs and a
/// 13-point grid over the same range.
ExperimentConfig overlap_preset(bool fast);
ExperimentConfig phi_error_preset(bool fast);

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Fields present in `doc` replace those of `base`; unknown keys are an
/// InvalidSpec error.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc, ExperimentConfig base);

/// Seed of trial `trial` derived from the master seed (splitmix64).
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

/// One trial's data with confidences attached to the training positives.
struct SyntheticTrial {
  GaussianSpec gaussian;
  Splits splits;
  /// Estimated confidence of the training positives, clipped.
  PconfDataset estimated;
  LinearModel confidence_model;
};

SyntheticTrial make_synthetic_trial(const ExperimentConfig& cfg, const Vector& mu_neg, std::size_t trial);
/// estimated confidences skewed by b and clipped again.
PconfDataset skewed_dataset(const SyntheticTrial& trial, double b, double floor);

/// Per-trial values keep their trial index; failed trials stay empty.
struct MetricSeries {
  std::vector<std::optional<double>> per_trial;
  TrialSummary summary() const;  // over present values; NaN mean when none
  std::size_t present() const;
};

struct MeanSettingResult {
  Vector mu_neg;
  MetricSeries supervised_accuracy;  // percent
  MetricSeries supervised_fn_rate;   // percent
  double phi_hat = 0.0;              // fraction, mean supervised FN rate
};

struct AdjustedResult {
  double c = 1.0;
  MetricSeries accuracy;  // percent
  MetricSeries k_star;
  MetricSeries valid_fn_rate;  // percent, on the validation positives
};

struct CellResult {
  std::size_t mu_index = 0;
  double b = 1.0;
  MetricSeries original_accuracy;  // percent
  std::vector<AdjustedResult> adjusted;  // aligned with SweepReport::c_values
  std::vector<std::string> failures;
};

struct SweepReport {
  std::vector<MeanSettingResult> settings;
  std::vector<CellResult> cells;  // mu-major, then b
  std::vector<double> c_values;   // ascending, always contains 1.0
  std::size_t reference_c = 0;    // index of c = 1.0

  const CellResult& cell(std::size_t mu_index, double b) const;
  const AdjustedResult& adjusted(const CellResult& cell, double c) const;
};

/// Paired t-test on trials where both series are present.
TTestResult paired_test(const MetricSeries& a, const MetricSeries& b, double alpha = 0.05);

struct BoundaryModels {
  LabeledDataset test;
  std::vector<std::pair<std::string, ScorerModel>> models;
};

/// Runs the sweep for the given phi multipliers. When `plot` is non-null it
/// receives the original, adjusted (c = 1) and supervised models of trial 0
/// of the first cell, with that trial's test split.
SweepReport run_sweep(const ExperimentConfig& cfg, const std::vector<double>& c_values, BoundaryModels* plot = nullptr);

/// Class-overlap sweep (c = 1 only). Writes results.csv, trials.csv,
/// boundary.svg and config.json when output_dir is non-empty.
SweepReport run_overlap_experiment(const ExperimentConfig& cfg, const std::string& output_dir);
/// phi estimation-error sweep over cfg.c_list (plus the c = 1 reference).
/// Writes results.csv, trials.csv and config.json.
SweepReport run_phi_error_experiment(const ExperimentConfig& cfg, const std::string& output_dir);

std::string results_csv(const SweepReport& report, bool phi_error);
std::string trials_csv(const SweepReport& report);
std::string format_vector(const Vector& v);

}  // namespace pconf

#endif  // PCONF_EXPERIMENT_HPP
