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

#include "pconf/optim.hpp"

#include <cmath>
#include <string>

namespace pconf {

void AdamConfig::validate() const {
  require(std::isfinite(learning_rate) && learning_rate > 0.0, ErrorCode::InvalidSpec,
          "learning_rate must be positive");
  require(beta1 >= 0.0 && beta1 < 1.0, ErrorCode::InvalidSpec, "beta1 must lie in [0, 1)");
  require(beta2 >= 0.0 && beta2 < 1.0, ErrorCode::InvalidSpec, "beta2 must lie in [0, 1)");
  require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::InvalidSpec, "epsilon must be positive");
  require(epochs >= 1, ErrorCode::InvalidSpec, "epochs must be at least 1");
  require(std::isfinite(weight_decay) && weight_decay >= 0.0, ErrorCode::InvalidSpec,
          "weight_decay must be non-negative");
}

AdamState AdamState::zeros(Eigen::Index n) {
  return AdamState{Vector::Zero(n), Vector::Zero(n), 0};
}

void adam_step(Vector& params, const Vector& grad, AdamState& state, const AdamConfig& cfg) {
  require(grad.size() == params.size() && state.first_moment.size() == params.size() &&
              state.second_moment.size() == params.size(),
          ErrorCode::Contract, "Adam parameter, gradient and state shapes differ");
  if (!grad.allFinite()) {
    throw DivergedError(state.step_count, "non-finite gradient at step " + std::to_string(state.step_count));
  }
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  state.first_moment = cfg.beta1 * state.first_moment + (1.0 - cfg.beta1) * grad;
  state.second_moment = cfg.beta2 * state.second_moment + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  const Vector step = (state.first_moment / c1).array() /
                      ((state.second_moment / c2).array().sqrt() + cfg.epsilon);
  if (cfg.weight_decay > 0.0) {
    params -= cfg.learning_rate * step + cfg.learning_rate * cfg.weight_decay * params;
  } else {
    params -= cfg.learning_rate * step;
  }
}

MinimizeResult minimize(const Objective& objective, Vector init, const AdamConfig& cfg) {
  cfg.validate();
  MinimizeResult result;
  result.params = std::move(init);
  result.loss_trajectory.reserve(cfg.epochs);
  AdamState state = AdamState::zeros(result.params.size());
  Vector grad(result.params.size());
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double loss = objective(result.params, grad);
    if (!std::isfinite(loss)) {
      throw DivergedError(epoch, "non-finite loss at step " + std::to_string(epoch));
    }
    result.loss_trajectory.push_back(loss);
    adam_step(result.params, grad, state, cfg);
  }
  return result;
}

}  // namespace pconf
