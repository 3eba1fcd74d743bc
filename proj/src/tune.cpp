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

#include "pconf/tune.hpp"

#include "pconf/parallel.hpp"
#include "pconf/risk.hpp"

#include <cmath>
#include <limits>

namespace pconf {

double zero_one_loss(double z) { return sign_label(z) > 0 ? 0.0 : 1.0; }

double empirical_fn_rate(const ScorerModel& model, const Matrix& valid_pos) {
  require(valid_pos.rows() >= 1, ErrorCode::Contract, "validation set is empty");
  const Vector s = score_all(model, valid_pos);
  double errors = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) errors += zero_one_loss(s[i]);
  return errors / static_cast<double>(s.size());
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
  require(lo > 0.0 && hi >= lo && points >= 1, ErrorCode::InvalidSpec,
          "geometric grid needs 0 < lo <= hi and at least one point");
  require(points > 1 || lo == hi, ErrorCode::InvalidSpec, "a single-point grid needs lo == hi");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double log_lo = std::log2(lo);
  const double step = (std::log2(hi) - log_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = std::exp2(log_lo + step * static_cast<double>(i));
  }
  grid.back() = hi;
  return grid;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  require(hi >= lo && points >= 1, ErrorCode::InvalidSpec, "linear grid needs lo <= hi and at least one point");
  require(points > 1 || lo == hi, ErrorCode::InvalidSpec, "a single-point grid needs lo == hi");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  if (points > 1) grid.back() = hi;
  return grid;
}

void TuneConfig::validate() const {
  require(std::isfinite(phi) && phi >= 0.0 && phi <= 1.0, ErrorCode::InvalidSpec, "phi must lie in [0, 1]");
  require(!grid.empty(), ErrorCode::InvalidSpec, "k grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    AdjustmentSpec{family, grid[i], floor}.validate();
    if (i > 0) require(grid[i] > grid[i - 1], ErrorCode::InvalidSpec, "k grid must be strictly increasing");
  }
  adam.validate();
}

std::vector<GridEntry> evaluate_grid(const PconfDataset& train, const Matrix& valid_pos, const TuneConfig& cfg) {
  cfg.validate();
  train.validate();
  require(valid_pos.rows() >= 1, ErrorCode::Contract, "validation set is empty");
  require(valid_pos.cols() == train.features.cols(), ErrorCode::Contract,
          "validation and training dimensions differ");
  std::vector<GridEntry> entries(cfg.grid.size());
  parallel_for(cfg.grid.size(), cfg.threads, [&](std::size_t i) {
    GridEntry& entry = entries[i];
    entry.k = cfg.grid[i];
    const PconfDataset adjusted{train.features, adjust_all(train.confidence, {cfg.family, entry.k, cfg.floor})};
    try {
      TrainedModel fit = train_pconf(adjusted, cfg.adam, cfg.model);
      entry.fn_rate = empirical_fn_rate(fit.model, valid_pos);
      entry.model = std::move(fit.model);
    } catch (const DivergedError& e) {
      entry.failure = e.what();
    }
  });
  return entries;
}

namespace {

double adjustment_size(double k, AdjustFamily family) {
  return family == AdjustFamily::Power ? std::abs(std::log(k)) : std::abs(k);
}

}  // namespace

TuneResult select_k(const std::vector<GridEntry>& grid, double phi, AdjustFamily family) {
  TuneResult result;
  std::size_t best = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const GridEntry& e = grid[i];
    TuneCandidate c{e.k, e.fn_rate, std::numeric_limits<double>::infinity(), !e.model.has_value(), e.failure};
    if (!c.failed) c.squared_error = (e.fn_rate - phi) * (e.fn_rate - phi);
    result.objective_values.push_back(c);
    if (c.failed) continue;
    if (best == grid.size()) {
      best = i;
      continue;
    }
    const TuneCandidate& b = result.objective_values[best];
    if (c.squared_error < b.squared_error ||
        (c.squared_error == b.squared_error && adjustment_size(c.k, family) < adjustment_size(b.k, family))) {
      best = i;
    }
  }
  if (best == grid.size()) fail(ErrorCode::Tuning, "training diverged for every k candidate");
  result.k_star = grid[best].k;
  result.model = *grid[best].model;
  return result;
}

TuneResult tune_k(const PconfDataset& train, const Matrix& valid_pos, const TuneConfig& cfg) {
  return select_k(evaluate_grid(train, valid_pos, cfg), cfg.phi, cfg.family);
}

}  // namespace pconf
