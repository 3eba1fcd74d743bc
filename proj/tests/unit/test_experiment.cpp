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

#include "pconf/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pconf;

namespace {

ExperimentConfig tiny() {
  ExperimentConfig cfg = overlap_preset(true);
  cfg.mu_neg_list = {Vector::Constant(2, 1.5)};
  cfg.b_list = {0.5};
  cfg.c_list = {0.5};
  cfg.trials = 2;
  cfg.adam.epochs = 100;
  cfg.k_grid_points = 5;
  for (auto* n : {&cfg.split.n_train_pos, &cfg.split.n_train_neg, &cfg.split.n_valid_pos, &cfg.split.n_test_pos,
                  &cfg.split.n_test_neg, &cfg.split.n_confest_pos, &cfg.split.n_confest_neg}) {
    *n = 80;
  }
  cfg.split.seed = 3;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("presets") {
  const auto full = overlap_preset(false);
  CHECK(full.mu_neg_list.size() == 5);
  CHECK(full.b_list == std::vector<double>{0.3, 0.5, 2.0, 4.0});
  CHECK(full.adam.epochs == 5000);
  CHECK(full.k_grid().size() == 25);
  const auto fast = overlap_preset(true);
  CHECK(fast.adam.epochs == 2500);
  CHECK(fast.k_grid().size() == 13);
  CHECK(phi_error_preset(true).b_list == std::vector<double>{0.3, 4.0});
  CHECK(phi_error_preset(false).c_list == std::vector<double>{0.5, 0.7, 1.3, 1.5});
}

TEST_CASE("config json round trip and validation") {
  const auto cfg = tiny();
  const auto back = experiment_config_from_json(to_json(cfg), overlap_preset(false));
  CHECK(to_json(back) == to_json(cfg));
  CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json{{"trails", 3}}, cfg), Error);
  CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json{{"adam", {{"lr", 1.0}}}}, cfg), Error);
  CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json{{"trials", 0}}, cfg), Error);
  CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json{{"b_list", nlohmann::json::array()}}, cfg), Error);
  const auto patched = experiment_config_from_json(nlohmann::json{{"seed", 99}, {"tune", {{"family", "additive"},
      {"k_grid_min", -0.5}, {"k_grid_max", 0.5}}}}, cfg);
  CHECK(patched.split.seed == 99);
  CHECK(patched.family == AdjustFamily::Additive);
  CHECK(patched.k_grid().front() == -0.5);
}

TEST_CASE("trial seeds differ per trial and are stable") {
  CHECK(trial_seed(42, 0) != trial_seed(42, 1));
  CHECK(trial_seed(42, 0) != trial_seed(43, 0));
  CHECK(trial_seed(42, 5) == trial_seed(42, 5));
}

TEST_CASE("synthetic trial confidences are clipped and skewable") {
  const auto cfg = tiny();
  const auto t = make_synthetic_trial(cfg, cfg.mu_neg_list[0], 0);
  CHECK(t.estimated.rows() == 80);
  CHECK(t.estimated.confidence.minCoeff() >= cfg.floor);
  CHECK(t.estimated.confidence.maxCoeff() <= 1.0);
  const auto sk = skewed_dataset(t, 4.0, cfg.floor);
  CHECK(sk.confidence.minCoeff() >= cfg.floor);
  for (Eigen::Index i = 0; i < sk.confidence.size(); ++i) CHECK(sk.confidence[i] <= t.estimated.confidence[i]);
}

TEST_CASE("single-trial sweep has zero std and phi-hat matches the supervised column") {
  auto cfg = tiny();
  cfg.trials = 1;
  const auto rep = run_sweep(cfg, {1.0});
  REQUIRE(rep.cells.size() == 1);
  CHECK(rep.cells[0].original_accuracy.summary().std == 0.0);
  CHECK(rep.settings[0].phi_hat == doctest::Approx(rep.settings[0].supervised_fn_rate.summary().mean / 100.0));
  CHECK(rep.c_values == std::vector<double>{1.0});
}

TEST_CASE("sweep layout and reproducibility") {
  auto cfg = tiny();
  cfg.mu_neg_list.push_back(Vector::Constant(2, 2.5));
  cfg.b_list = {0.3, 2.0};
  const auto a = run_sweep(cfg, {0.5, 1.5});
  CHECK(a.cells.size() == 4);
  CHECK(a.c_values == std::vector<double>{0.5, 1.0, 1.5});
  CHECK(a.reference_c == 1);
  CHECK(a.cell(1, 2.0).mu_index == 1);
  CHECK(a.adjusted(a.cell(0, 0.3), 1.5).accuracy.present() == 2);
  for (const auto& c : a.cells) CHECK(c.failures.empty());
  cfg.threads = 3;
  const auto b = run_sweep(cfg, {0.5, 1.5});
  CHECK(results_csv(a, true) == results_csv(b, true));
  CHECK(trials_csv(a) == trials_csv(b));
}

TEST_CASE("numeric failures are recorded per cell and the run continues") {
  auto cfg = tiny();
  cfg.adam.learning_rate = 1e308;
  cfg.adam.epochs = 20;
  const auto rep = run_sweep(cfg, {1.0});
  REQUIRE(rep.cells.size() == 1);
  CHECK_FALSE(rep.cells[0].failures.empty());
  CHECK(std::isnan(rep.cells[0].adjusted[0].accuracy.summary().mean));
  CHECK(results_csv(rep, false).find("nan") != std::string::npos);
}

TEST_CASE("experiment drivers write their reports") {
  const auto dir = std::filesystem::temp_directory_path() / "pconf_unit_experiment";
  std::filesystem::remove_all(dir);
  const auto cfg = tiny();
  run_overlap_experiment(cfg, dir.string());
  for (const char* f : {"results.csv", "trials.csv", "boundary.svg", "config.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  const std::string results = slurp(dir / "results.csv");
  CHECK(results.rfind("mu_neg,b,c,method,metric,mean,std,trials,bold,t_statistic,p_value\n", 0) == 0);
  CHECK(results.find("1.5;1.5,,,supervised,fn_rate") != std::string::npos);
  CHECK(results.find("1.5;1.5,0.5,,original_pconf,accuracy") != std::string::npos);
  const std::string svg = slurp(dir / "boundary.svg");
  CHECK(svg.find("original Pconf") != std::string::npos);
  CHECK(svg.find("adjusted Pconf") != std::string::npos);
  CHECK(svg.find("supervised") != std::string::npos);
  const auto echoed = nlohmann::json::parse(slurp(dir / "config.json"));
  CHECK(echoed == to_json(cfg));

  const auto dir2 = dir / "phi";
  run_phi_error_experiment(cfg, dir2.string());
  const std::string r2 = slurp(dir2 / "results.csv");
  CHECK(r2.find(",0.5,adjusted_pconf,accuracy") != std::string::npos);
  CHECK(r2.find(",1,adjusted_pconf,accuracy") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir2 / "boundary.svg"));
  std::filesystem::remove_all(dir);
}
