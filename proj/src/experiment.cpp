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

#include "pconf/parallel.hpp"
#include "pconf/plot.hpp"
#include "pconf/risk.hpp"
#include "pconf/tune.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

namespace pconf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vector diag_point(double v) { return Vector::Constant(2, v); }

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return splitmix64(splitmix64(master) + static_cast<std::uint64_t>(trial));
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  require(mu_pos.size() >= 1 && mu_pos.allFinite(), ErrorCode::InvalidSpec, "mu_pos must be a finite vector");
  require(!mu_neg_list.empty(), ErrorCode::InvalidSpec, "mu_neg_list is empty");
  for (const auto& mu : mu_neg_list) {
    require(mu.size() == mu_pos.size() && mu.allFinite(), ErrorCode::InvalidSpec,
            "every mu_neg must be finite and match mu_pos in dimension");
  }
  require(!b_list.empty(), ErrorCode::InvalidSpec, "b_list is empty");
  for (double b : b_list) SkewSpec{b}.validate();
  for (double c : c_list) {
    require(std::isfinite(c) && c > 0.0, ErrorCode::InvalidSpec, "phi multipliers must be positive");
  }
  require(trials >= 1, ErrorCode::InvalidSpec, "trials must be at least 1");
  split.validate();
  adam.validate();
  require(std::isfinite(l2_strength) && l2_strength >= 0.0, ErrorCode::InvalidSpec, "l2_strength must be non-negative");
  require(floor > 0.0 && floor < 0.5, ErrorCode::InvalidSpec, "floor must lie in (0, 0.5)");
  if (model.kind == ModelKind::Kernel) {
    require(model.bandwidth > 0.0, ErrorCode::InvalidSpec, "kernel bandwidth must be positive");
  }
  TuneConfig probe;
  probe.grid = k_grid();
  probe.family = family;
  probe.floor = floor;
  probe.adam = adam;
  probe.validate();
}

std::vector<double> ExperimentConfig::k_grid() const {
  if (family == AdjustFamily::Power) return geometric_grid(k_grid_min, k_grid_max, k_grid_points);
  return linear_grid(k_grid_min, k_grid_max, k_grid_points);
}

ExperimentConfig overlap_preset(bool fast) {
  ExperimentConfig cfg;
  cfg.mu_neg_list = {diag_point(1.0), diag_point(1.5), diag_point(2.0), diag_point(2.5), diag_point(3.0)};
  cfg.b_list = {0.3, 0.5, 2.0, 4.0};
  cfg.c_list = {0.5, 0.7, 1.3, 1.5};
  cfg.adam.learning_rate = 1e-2;
  cfg.adam.epochs = fast ? 2500 : 5000;
  cfg.k_grid_points = fast ? 13 : 25;
  return cfg;
}

ExperimentConfig phi_error_preset(bool fast) {
  ExperimentConfig cfg = overlap_preset(fast);
  cfg.b_list = {0.3, 4.0};
  return cfg;
}

namespace {

nlohmann::json vec_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector json_vec(const nlohmann::json& a, const char* what) {
  if (!a.is_array() || a.empty()) fail(ErrorCode::InvalidSpec, std::string(what) + " must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) fail(ErrorCode::InvalidSpec, std::string(what) + " must contain numbers");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

std::vector<double> json_list(const nlohmann::json& a, const char* what) {
  const Vector v = json_vec(a, what);
  return {v.data(), v.data() + v.size()};
}

void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) fail(ErrorCode::InvalidSpec, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(ErrorCode::InvalidSpec, "unknown config key '" + where + "." + key + "'");
  }
}

template <class T>
void read_field(const nlohmann::json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::InvalidSpec, std::string("config key '") + key + "' has the wrong type");
  }
}

std::size_t read_count(const nlohmann::json& obj, const char* key, std::size_t current) {
  if (!obj.contains(key)) return current;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(ErrorCode::InvalidSpec, std::string("config key '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json mus = nlohmann::json::array();
  for (const auto& mu : cfg.mu_neg_list) mus.push_back(vec_json(mu));
  return {
      {"mu_pos", vec_json(cfg.mu_pos)},
      {"mu_neg_list", mus},
      {"b_list", cfg.b_list},
      {"c_list", cfg.c_list},
      {"trials", cfg.trials},
      {"seed", cfg.split.seed},
      {"threads", cfg.threads},
      {"split",
       {{"n_train_pos", cfg.split.n_train_pos},
        {"n_train_neg", cfg.split.n_train_neg},
        {"n_valid_pos", cfg.split.n_valid_pos},
        {"n_test_pos", cfg.split.n_test_pos},
        {"n_test_neg", cfg.split.n_test_neg},
        {"n_confest_pos", cfg.split.n_confest_pos},
        {"n_confest_neg", cfg.split.n_confest_neg}}},
      {"adam",
       {{"learning_rate", cfg.adam.learning_rate},
        {"beta1", cfg.adam.beta1},
        {"beta2", cfg.adam.beta2},
        {"epsilon", cfg.adam.epsilon},
        {"epochs", cfg.adam.epochs},
        {"weight_decay", cfg.adam.weight_decay}}},
      {"confidence", {{"l2_strength", cfg.l2_strength}, {"floor", cfg.floor}}},
      {"tune",
       {{"family", to_string(cfg.family)},
        {"k_grid_min", cfg.k_grid_min},
        {"k_grid_max", cfg.k_grid_max},
        {"k_grid_points", cfg.k_grid_points}}},
      {"model", {{"kind", cfg.model.kind == ModelKind::Linear ? "linear" : "kernel"}, {"bandwidth", cfg.model.bandwidth}}},
  };
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc, ExperimentConfig cfg) {
  check_keys(doc, {"mu_pos", "mu_neg_list", "b_list", "c_list", "trials", "seed", "threads", "split", "adam",
                   "confidence", "tune", "model"},
             "config");
  if (doc.contains("mu_pos")) cfg.mu_pos = json_vec(doc["mu_pos"], "mu_pos");
  if (doc.contains("mu_neg_list")) {
    const auto& list = doc["mu_neg_list"];
    if (!list.is_array() || list.empty()) fail(ErrorCode::InvalidSpec, "mu_neg_list must be a non-empty array");
    cfg.mu_neg_list.clear();
    for (const auto& mu : list) cfg.mu_neg_list.push_back(json_vec(mu, "mu_neg_list entry"));
  }
  if (doc.contains("b_list")) cfg.b_list = json_list(doc["b_list"], "b_list");
  if (doc.contains("c_list")) cfg.c_list = json_list(doc["c_list"], "c_list");
  cfg.trials = read_count(doc, "trials", cfg.trials);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) fail(ErrorCode::InvalidSpec, "config key 'seed' must be an integer");
    cfg.split.seed = doc["seed"].get<std::uint64_t>();
  }
  cfg.threads = read_count(doc, "threads", cfg.threads);
  if (doc.contains("split")) {
    const auto& s = doc["split"];
    check_keys(s, {"n_train_pos", "n_train_neg", "n_valid_pos", "n_test_pos", "n_test_neg", "n_confest_pos",
                   "n_confest_neg"},
               "split");
    cfg.split.n_train_pos = read_count(s, "n_train_pos", cfg.split.n_train_pos);
    cfg.split.n_train_neg = read_count(s, "n_train_neg", cfg.split.n_train_neg);
    cfg.split.n_valid_pos = read_count(s, "n_valid_pos", cfg.split.n_valid_pos);
    cfg.split.n_test_pos = read_count(s, "n_test_pos", cfg.split.n_test_pos);
    cfg.split.n_test_neg = read_count(s, "n_test_neg", cfg.split.n_test_neg);
    cfg.split.n_confest_pos = read_count(s, "n_confest_pos", cfg.split.n_confest_pos);
    cfg.split.n_confest_neg = read_count(s, "n_confest_neg", cfg.split.n_confest_neg);
  }
  if (doc.contains("adam")) {
    const auto& a = doc["adam"];
    check_keys(a, {"learning_rate", "beta1", "beta2", "epsilon", "epochs", "weight_decay"}, "adam");
    read_field(a, "learning_rate", cfg.adam.learning_rate);
    read_field(a, "beta1", cfg.adam.beta1);
    read_field(a, "beta2", cfg.adam.beta2);
    read_field(a, "epsilon", cfg.adam.epsilon);
    cfg.adam.epochs = read_count(a, "epochs", cfg.adam.epochs);
    read_field(a, "weight_decay", cfg.adam.weight_decay);
  }
  if (doc.contains("confidence")) {
    const auto& c = doc["confidence"];
    check_keys(c, {"l2_strength", "floor"}, "confidence");
    read_field(c, "l2_strength", cfg.l2_strength);
    read_field(c, "floor", cfg.floor);
  }
  if (doc.contains("tune")) {
    const auto& t = doc["tune"];
    check_keys(t, {"family", "k_grid_min", "k_grid_max", "k_grid_points"}, "tune");
    if (t.contains("family")) {
      std::string family;
      read_field(t, "family", family);
      cfg.family = adjust_family_from_string(family);
    }
    read_field(t, "k_grid_min", cfg.k_grid_min);
    read_field(t, "k_grid_max", cfg.k_grid_max);
    cfg.k_grid_points = read_count(t, "k_grid_points", cfg.k_grid_points);
  }
  if (doc.contains("model")) {
    const auto& m = doc["model"];
    check_keys(m, {"kind", "bandwidth"}, "model");
    if (m.contains("kind")) {
      std::string kind;
      read_field(m, "kind", kind);
      if (kind == "linear") cfg.model.kind = ModelKind::Linear;
      else if (kind == "kernel") cfg.model.kind = ModelKind::Kernel;
      else fail(ErrorCode::InvalidSpec, "unknown model kind '" + kind + "'");
    }
    read_field(m, "bandwidth", cfg.model.bandwidth);
  }
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Trial data

SyntheticTrial make_synthetic_trial(const ExperimentConfig& cfg, const Vector& mu_neg, std::size_t trial) {
  SyntheticTrial out;
  out.gaussian = GaussianSpec::isotropic(cfg.mu_pos, mu_neg);
  SplitSpec split = cfg.split;
  split.seed = trial_seed(cfg.split.seed, trial);
  out.splits = make_splits(out.gaussian, split);
  const ConfidenceFunction conf = estimate_confidence(out.splits.conf_est, cfg.l2_strength, cfg.adam);
  out.confidence_model = conf.model();
  out.estimated.features = out.splits.train.positives();
  out.estimated.confidence = clip_all(conf.evaluate(out.estimated.features), cfg.floor);
  return out;
}

PconfDataset skewed_dataset(const SyntheticTrial& trial, double b, double floor) {
  return {trial.estimated.features, clip_all(skew_all(trial.estimated.confidence, SkewSpec{b}), floor)};
}

// ---------------------------------------------------------------------------
// Results

TrialSummary MetricSeries::summary() const {
  std::vector<double> values;
  for (const auto& v : per_trial) {
    if (v) values.push_back(*v);
  }
  if (values.empty()) return TrialSummary{{}, kNaN, kNaN};
  return summarize(values);
}

std::size_t MetricSeries::present() const {
  return static_cast<std::size_t>(std::count_if(per_trial.begin(), per_trial.end(), [](const auto& v) { return v.has_value(); }));
}

TTestResult paired_test(const MetricSeries& a, const MetricSeries& b, double alpha) {
  std::vector<double> xa, xb;
  for (std::size_t i = 0; i < std::min(a.per_trial.size(), b.per_trial.size()); ++i) {
    if (a.per_trial[i] && b.per_trial[i]) {
      xa.push_back(*a.per_trial[i]);
      xb.push_back(*b.per_trial[i]);
    }
  }
  return paired_t_test(xa, xb, alpha);
}

const CellResult& SweepReport::cell(std::size_t mu_index, double b) const {
  for (const auto& c : cells) {
    if (c.mu_index == mu_index && c.b == b) return c;
  }
  fail(ErrorCode::Contract, "no result cell for the requested (mu, b)");
}

const AdjustedResult& SweepReport::adjusted(const CellResult& cell, double c) const {
  for (const auto& a : cell.adjusted) {
    if (a.c == c) return a;
  }
  fail(ErrorCode::Contract, "no adjusted result for the requested phi multiplier");
}

namespace {

bool numeric_failure(const Error& e) { return e.code() == ErrorCode::Diverged || e.code() == ErrorCode::Tuning; }

struct TrialState {
  std::optional<SyntheticTrial> data;
  std::optional<ScorerModel> supervised;
  std::string error;
};

MetricSeries empty_series(std::size_t trials) { return MetricSeries{std::vector<std::optional<double>>(trials)}; }

}  // namespace

SweepReport run_sweep(const ExperimentConfig& cfg, const std::vector<double>& c_in, BoundaryModels* plot) {
  cfg.validate();
  SweepReport report;
  {
    std::set<double> cs(c_in.begin(), c_in.end());
    cs.insert(1.0);
    report.c_values.assign(cs.begin(), cs.end());
    report.reference_c = static_cast<std::size_t>(
        std::find(report.c_values.begin(), report.c_values.end(), 1.0) - report.c_values.begin());
  }
  const std::size_t n_mu = cfg.mu_neg_list.size();
  const std::size_t n_b = cfg.b_list.size();
  const std::size_t n_t = cfg.trials;
  const std::size_t n_c = report.c_values.size();

  // Pass 1: data, supervised baseline and confidence estimate per (mu, trial).
  std::vector<TrialState> states(n_mu * n_t);
  report.settings.resize(n_mu);
  for (std::size_t m = 0; m < n_mu; ++m) {
    report.settings[m].mu_neg = cfg.mu_neg_list[m];
    report.settings[m].supervised_accuracy = empty_series(n_t);
    report.settings[m].supervised_fn_rate = empty_series(n_t);
  }
  parallel_for(n_mu * n_t, cfg.threads, [&](std::size_t idx) {
    const std::size_t m = idx / n_t;
    const std::size_t t = idx % n_t;
    TrialState& st = states[idx];
    const GaussianSpec gaussian = GaussianSpec::isotropic(cfg.mu_pos, cfg.mu_neg_list[m]);
    SplitSpec split = cfg.split;
    split.seed = trial_seed(cfg.split.seed, t);
    Splits splits = make_splits(gaussian, split);
    try {
      TrainedModel sup = train_supervised(splits.train, cfg.adam, cfg.model);
      report.settings[m].supervised_accuracy.per_trial[t] = 100.0 * accuracy(sup.model, splits.test);
      report.settings[m].supervised_fn_rate.per_trial[t] = 100.0 * fn_rate(sup.model, splits.test);
      st.supervised = std::move(sup.model);
    } catch (const Error& e) {
      if (!numeric_failure(e)) throw;
      st.error = std::string("supervised: ") + e.what();
    }
    try {
      st.data = make_synthetic_trial(cfg, cfg.mu_neg_list[m], t);
    } catch (const Error& e) {
      if (!numeric_failure(e)) throw;
      st.error += std::string(st.error.empty() ? "" : "; ") + "confidence estimation: " + e.what();
    }
  });
  for (auto& s : report.settings) {
    s.phi_hat = s.supervised_fn_rate.summary().mean / 100.0;
  }

  // Pass 2: one task per (mu, b, trial).
  report.cells.resize(n_mu * n_b);
  for (std::size_t m = 0; m < n_mu; ++m) {
    for (std::size_t j = 0; j < n_b; ++j) {
      CellResult& cell = report.cells[m * n_b + j];
      cell.mu_index = m;
      cell.b = cfg.b_list[j];
      cell.original_accuracy = empty_series(n_t);
      for (double c : report.c_values) {
        cell.adjusted.push_back({c, empty_series(n_t), empty_series(n_t), empty_series(n_t)});
      }
    }
  }
  std::vector<std::vector<std::string>> task_failures(n_mu * n_b * n_t);
  std::optional<ScorerModel> plot_original;
  std::optional<ScorerModel> plot_adjusted;

  TuneConfig tune;
  tune.grid = cfg.k_grid();
  tune.model = cfg.model;
  tune.adam = cfg.adam;
  tune.family = cfg.family;
  tune.floor = cfg.floor;
  tune.threads = 1;

  parallel_for(n_mu * n_b * n_t, cfg.threads, [&](std::size_t idx) {
    const std::size_t t = idx % n_t;
    const std::size_t j = (idx / n_t) % n_b;
    const std::size_t m = idx / (n_t * n_b);
    CellResult& cell = report.cells[m * n_b + j];
    auto& notes = task_failures[idx];
    const TrialState& st = states[m * n_t + t];
    const std::string prefix = "trial " + std::to_string(t) + ": ";
    if (!st.data) {
      notes.push_back(prefix + (st.error.empty() ? "no data" : st.error));
      return;
    }
    const Splits& splits = st.data->splits;
    const PconfDataset train = skewed_dataset(*st.data, cfg.b_list[j], cfg.floor);
    const bool plot_task = plot && m == 0 && j == 0 && t == 0;

    try {
      TrainedModel orig = train_pconf(train, cfg.adam, cfg.model);
      cell.original_accuracy.per_trial[t] = 100.0 * accuracy(orig.model, splits.test);
      if (plot_task) plot_original = std::move(orig.model);
    } catch (const Error& e) {
      if (!numeric_failure(e)) throw;
      notes.push_back(prefix + "original Pconf: " + e.what());
    }

    const double phi_hat = report.settings[m].phi_hat;
    if (!std::isfinite(phi_hat)) {
      notes.push_back(prefix + "no phi estimate (every supervised trial failed)");
      return;
    }
    const std::vector<GridEntry> grid = evaluate_grid(train, splits.valid_pos, tune);
    for (std::size_t ci = 0; ci < n_c; ++ci) {
      AdjustedResult& adj = cell.adjusted[ci];
      const double phi = std::min(1.0, adj.c * phi_hat);
      try {
        const TuneResult chosen = select_k(grid, phi, cfg.family);
        adj.accuracy.per_trial[t] = 100.0 * accuracy(chosen.model, splits.test);
        adj.k_star.per_trial[t] = chosen.k_star;
        adj.valid_fn_rate.per_trial[t] = 100.0 * empirical_fn_rate(chosen.model, splits.valid_pos);
        if (plot_task && ci == report.reference_c) plot_adjusted = chosen.model;
      } catch (const Error& e) {
        if (!numeric_failure(e)) throw;
        notes.push_back(prefix + "adjusted Pconf (c=" + format_double(adj.c) + "): " + e.what());
      }
    }
  });
  for (std::size_t idx = 0; idx < task_failures.size(); ++idx) {
    const std::size_t cell_index = idx / n_t;
    for (auto& note : task_failures[idx]) report.cells[cell_index].failures.push_back(std::move(note));
  }

  if (plot) {
    plot->models.clear();
    const TrialState& st0 = states[0];
    if (st0.data) plot->test = st0.data->splits.test;
    if (plot_original) plot->models.emplace_back("original Pconf", *plot_original);
    if (plot_adjusted) plot->models.emplace_back("adjusted Pconf", *plot_adjusted);
    if (st0.supervised) plot->models.emplace_back("supervised", *st0.supervised);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Reports

std::string format_vector(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

namespace {

struct Row {
  std::string mu, b, c, method, metric;
  TrialSummary summary;
  std::size_t trials = 0;
  std::string bold, t, p;
};

std::string render_row(const Row& r) {
  return r.mu + ',' + r.b + ',' + r.c + ',' + r.method + ',' + r.metric + ',' + format_double(r.summary.mean) + ',' +
         format_double(r.summary.std) + ',' + std::to_string(r.trials) + ',' + r.bold + ',' + r.t + ',' + r.p + '\n';
}

Row series_row(const std::string& mu, const std::string& b, const std::string& c, const char* method,
               const char* metric, const MetricSeries& s) {
  return Row{mu, b, c, method, metric, s.summary(), s.present(), "", "", ""};
}

const char* flag(bool v) { return v ? "1" : "0"; }

}  // namespace

std::string results_csv(const SweepReport& report, bool phi_error) {
  std::string out = "mu_neg,b,c,method,metric,mean,std,trials,bold,t_statistic,p_value\n";
  for (std::size_t m = 0; m < report.settings.size(); ++m) {
    const auto& s = report.settings[m];
    const std::string mu = format_vector(s.mu_neg);
    out += render_row(series_row(mu, "", "", "supervised", "accuracy", s.supervised_accuracy));
    out += render_row(series_row(mu, "", "", "supervised", "fn_rate", s.supervised_fn_rate));
    for (const auto& cell : report.cells) {
      if (cell.mu_index != m) continue;
      const std::string b = format_double(cell.b);
      const AdjustedResult& ref = cell.adjusted[report.reference_c];
      Row orig = series_row(mu, b, "", "original_pconf", "accuracy", cell.original_accuracy);
      const TTestResult vs_orig = paired_test(ref.accuracy, cell.original_accuracy);
      if (!phi_error) {
        // Best method bold; both bold when the difference is not significant.
        const bool tie = vs_orig.undefined || !vs_orig.significant;
        const double mo = orig.summary.mean;
        const double ma = ref.accuracy.summary().mean;
        orig.bold = flag(tie || mo > ma);
        Row adj = series_row(mu, b, "1", "adjusted_pconf", "accuracy", ref.accuracy);
        adj.bold = flag(tie || ma >= mo);
        if (!vs_orig.undefined) {
          adj.t = format_double(vs_orig.t_statistic);
          adj.p = format_double(vs_orig.p_value);
        }
        out += render_row(orig);
        out += render_row(adj);
        out += render_row(series_row(mu, b, "1", "adjusted_pconf", "k_star", ref.k_star));
        continue;
      }
      out += render_row(orig);
      for (std::size_t ci = 0; ci < cell.adjusted.size(); ++ci) {
        const AdjustedResult& adj = cell.adjusted[ci];
        const std::string c = format_double(adj.c);
        Row row = series_row(mu, b, c, "adjusted_pconf", "accuracy", adj.accuracy);
        if (ci == report.reference_c) {
          row.bold = "1";
        } else {
          // Bold when comparable to the c = 1 reference.
          const TTestResult tt = paired_test(adj.accuracy, ref.accuracy);
          row.bold = flag(tt.undefined || !tt.significant);
          if (!tt.undefined) {
            row.t = format_double(tt.t_statistic);
            row.p = format_double(tt.p_value);
          }
        }
        out += render_row(row);
        out += render_row(series_row(mu, b, c, "adjusted_pconf", "k_star", adj.k_star));
      }
    }
  }
  return out;
}

std::string trials_csv(const SweepReport& report) {
  std::string out = "mu_neg,b,c,method,metric,trial,value\n";
  const auto emit = [&](const std::string& prefix, const MetricSeries& s) {
    for (std::size_t t = 0; t < s.per_trial.size(); ++t) {
      out += prefix + ',' + std::to_string(t) + ',' + (s.per_trial[t] ? format_double(*s.per_trial[t]) : "") + '\n';
    }
  };
  for (std::size_t m = 0; m < report.settings.size(); ++m) {
    const auto& s = report.settings[m];
    const std::string mu = format_vector(s.mu_neg);
    emit(mu + ",,,supervised,accuracy", s.supervised_accuracy);
    emit(mu + ",,,supervised,fn_rate", s.supervised_fn_rate);
    for (const auto& cell : report.cells) {
      if (cell.mu_index != m) continue;
      const std::string b = format_double(cell.b);
      emit(mu + ',' + b + ",,original_pconf,accuracy", cell.original_accuracy);
      for (const auto& adj : cell.adjusted) {
        const std::string key = mu + ',' + b + ',' + format_double(adj.c) + ",adjusted_pconf,";
        emit(key + "accuracy", adj.accuracy);
        emit(key + "k_star", adj.k_star);
        emit(key + "valid_fn_rate", adj.valid_fn_rate);
      }
    }
  }
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

std::string failures_text(const SweepReport& report) {
  std::string out;
  for (const auto& cell : report.cells) {
    for (const auto& f : cell.failures) {
      out += format_vector(report.settings[cell.mu_index].mu_neg) + " b=" + format_double(cell.b) + " " + f + '\n';
    }
  }
  return out;
}

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create output directory '" + dir + "': " + ec.message());
}

void write_common(const SweepReport& report, const ExperimentConfig& cfg, const std::string& dir, bool phi_error) {
  const std::filesystem::path base(dir);
  write_text(base / "results.csv", results_csv(report, phi_error));
  write_text(base / "trials.csv", trials_csv(report));
  write_text(base / "config.json", to_json(cfg).dump(2) + "\n");
  const std::string failures = failures_text(report);
  if (!failures.empty()) write_text(base / "failures.txt", failures);
}

}  // namespace

SweepReport run_overlap_experiment(const ExperimentConfig& cfg, const std::string& output_dir) {
  cfg.validate();
  if (!output_dir.empty()) prepare_dir(output_dir);
  BoundaryModels plot;
  const bool want_plot = !output_dir.empty() && cfg.mu_pos.size() == 2 && cfg.model.kind == ModelKind::Linear;
  SweepReport report = run_sweep(cfg, {1.0}, want_plot ? &plot : nullptr);
  if (!output_dir.empty()) {
    write_common(report, cfg, output_dir, false);
    if (want_plot && plot.test.rows() > 0) {
      std::vector<NamedModel> named;
      for (auto& [name, model] : plot.models) named.push_back({name, model});
      plot_boundary_svg(named, plot.test, (std::filesystem::path(output_dir) / "boundary.svg").string());
    }
  }
  return report;
}

SweepReport run_phi_error_experiment(const ExperimentConfig& cfg, const std::string& output_dir) {
  cfg.validate();
  require(!cfg.c_list.empty(), ErrorCode::InvalidSpec, "c_list is empty");
  if (!output_dir.empty()) prepare_dir(output_dir);
  SweepReport report = run_sweep(cfg, cfg.c_list);
  if (!output_dir.empty()) write_common(report, cfg, output_dir, true);
  return report;
}

}  // namespace pconf
