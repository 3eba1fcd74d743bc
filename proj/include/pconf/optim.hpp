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

// Full-batch Adam.

#ifndef PCONF_OPTIM_HPP
#define PCONF_OPTIM_HPP

#include "pconf/common.hpp"

#include <functional>
#include <vector>

namespace pconf {

/// Defaults are the published Adam defaults. The synthetic experiment presets
/// override learning_rate (see ExperimentConfig).
struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t epochs = 5000;
  double weight_decay = 0.0;

  void validate() const;
};

struct AdamState {
  Vector first_moment;
  Vector second_moment;
  std::size_t step_count = 0;

  static AdamState zeros(Eigen::Index n);
};

/// One bias-corrected Adam update in place. Decoupled weight decay subtracts
/// lr * weight_decay * params after the moment step. Throws DivergedError on a
/// non-finite gradient.
void adam_step(Vector& params, const Vector& grad, AdamState& state, const AdamConfig& cfg);

/// Returns the loss at `params` and writes the gradient into `grad`.
using Objective = std::function<double(const Vector& params, Vector& grad)>;

struct MinimizeResult {
  Vector params;
  /// Loss before each update; one entry per epoch.
  std::vector<double> loss_trajectory;
};

/// Exactly cfg.epochs full-batch Adam steps from `init`.
MinimizeResult minimize(const Objective& objective, Vector init, const AdamConfig& cfg);

}  // namespace pconf

#endif  // PCONF_OPTIM_HPP
