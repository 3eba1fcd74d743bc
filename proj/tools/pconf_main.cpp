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

// Command-line front end. Everything goes through the C API.

#include "pconf/pconf.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3, kInternal = 4 };

// Carries a C API failure up to main.
struct ApiFailure {
  pconf_status status;
  std::string message;
};

struct UsageError {
  std::string message;
};

void check(pconf_status s) {
  if (s != PCONF_OK) throw ApiFailure{s, pconf_last_error()};
}

int exit_code(pconf_status s) {
  switch (s) {
    case PCONF_OK: return kOk;
    case PCONF_ERR_INVALID_ARGUMENT:
    case PCONF_ERR_INVALID_SPEC:
    case PCONF_ERR_UNSUPPORTED: return kUsage;
    case PCONF_ERR_INVALID_DATA:
    case PCONF_ERR_PARSE:
    case PCONF_ERR_IO: return kData;
    case PCONF_ERR_DIVERGED:
    case PCONF_ERR_TUNING: return kNumeric;
    case PCONF_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

struct DatasetDeleter {
  void operator()(pconf_dataset* d) const { pconf_dataset_free(d); }
};
struct ModelDeleter {
  void operator()(pconf_model* m) const { pconf_model_free(m); }
};
struct TuneDeleter {
  void operator()(pconf_tune_result* r) const { pconf_tune_result_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { pconf_string_free(s); }
};
using Dataset = std::unique_ptr<pconf_dataset, DatasetDeleter>;
using Model = std::unique_ptr<pconf_model, ModelDeleter>;
using Tuned = std::unique_ptr<pconf_tune_result, TuneDeleter>;
using CString = std::unique_ptr<char, StringDeleter>;

Dataset load_dataset(const std::string& path) {
  pconf_dataset* d = nullptr;
  check(pconf_dataset_load_csv(path.c_str(), &d));
  return Dataset(d);
}

Model load_model(const std::string& path) {
  pconf_model* m = nullptr;
  check(pconf_model_load(path.c_str(), &m));
  return Model(m);
}

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ApiFailure{PCONF_ERR_IO, "cannot open '" + path + "' for writing"};
  out << text;
  if (!out) throw ApiFailure{PCONF_ERR_IO, "failed writing '" + path + "'"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ApiFailure{PCONF_ERR_IO, "cannot open '" + path + "' for reading"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size()) {
      throw UsageError{"cannot parse '" + text + "' as a comma-separated vector"};
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError{"empty vector '" + text + "'"};
  return out;
}

pconf_adjust_family parse_family(const std::string& name) {
  if (name == "power") return PCONF_ADJUST_POWER;
  if (name == "additive") return PCONF_ADJUST_ADDITIVE;
  throw UsageError{"unknown adjustment family '" + name + "'"};
}

// ---- shared option groups --------------------------------------------------

struct TrainOptions {
  std::optional<std::size_t> epochs;
  std::optional<double> lr;
  std::string model_kind = "linear";
  double bandwidth = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--epochs", epochs, "Adam epochs");
    app->add_option("--lr", lr, "Adam learning rate");
    app->add_option("--model-kind", model_kind, "linear or kernel")->check(CLI::IsMember({"linear", "kernel"}));
    app->add_option("--bandwidth", bandwidth, "Gaussian kernel bandwidth");
  }

  pconf_adam_config adam() const {
    pconf_adam_config a = pconf_adam_config_default();
    if (epochs) a.epochs = *epochs;
    if (lr) a.learning_rate = *lr;
    return a;
  }

  pconf_model_spec spec() const {
    return {model_kind == "kernel" ? PCONF_MODEL_KERNEL : PCONF_MODEL_LINEAR, bandwidth};
  }
};

// ---- synthetic experiments -------------------------------------------------

struct ExperimentOptions {
  std::string kind;
  std::string config_path;
  bool fast = false;
  bool print_config = false;
  std::string output_dir;
  std::optional<std::size_t> trials, threads, epochs, k_grid_points;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr, floor, k_grid_min, k_grid_max, bandwidth;
  std::vector<std::string> mu_neg;
  std::vector<double> b_list, c_list;
  std::optional<std::string> family, model_kind;

  void attach(CLI::App* app, bool with_c) {
    app->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_flag("--fast", fast, "Desk-scale preset (2,500 epochs, 13-point k grid)");
    app->add_flag("--print-config", print_config, "Print the effective config and exit");
    app->add_option("--output-dir", output_dir, "Directory for report files");
    app->add_option("--trials", trials);
    app->add_option("--seed", seed, "Master seed (overrides PCONF_SEED)");
    app->add_option("--threads", threads, "Worker threads, 0 = all cores");
    app->add_option("--mu-neg", mu_neg, "Negative-class mean, e.g. 1,1 (repeatable)");
    app->add_option("--b,--skew-b", b_list, "Skew exponents")->delimiter(',');
    if (with_c) app->add_option("--c,--phi-multiplier", c_list, "phi multipliers")->delimiter(',');
    app->add_option("--epochs", epochs);
    app->add_option("--lr", lr);
    app->add_option("--adjust-family", family)->check(CLI::IsMember({"power", "additive"}));
    app->add_option("--floor", floor, "Confidence clipping floor");
    app->add_option("--k-grid-min", k_grid_min);
    app->add_option("--k-grid-max", k_grid_max);
    app->add_option("--k-grid-points", k_grid_points);
    app->add_option("--model-kind", model_kind)->check(CLI::IsMember({"linear", "kernel"}));
    app->add_option("--bandwidth", bandwidth);
  }

  json effective_config() const {
    char* raw = nullptr;
    check(pconf_experiment_default_config(kind.c_str(), fast ? 1 : 0, &raw));
    json cfg = json::parse(CString(raw).get());
    if (!config_path.empty()) {
      json file;
      try {
        file = json::parse(read_file(config_path));
      } catch (const json::exception& e) {
        throw ApiFailure{PCONF_ERR_PARSE, config_path + ": " + e.what()};
      }
      cfg.merge_patch(file);
    }
    if (const char* env = std::getenv("PCONF_SEED"); env != nullptr && *env != '\0') {
      std::uint64_t s = 0;
      const std::string text(env);
      const auto r = std::from_chars(text.data(), text.data() + text.size(), s);
      if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
        throw UsageError{"PCONF_SEED must be a non-negative integer"};
      }
      cfg["seed"] = s;
    }
    if (seed) cfg["seed"] = *seed;
    if (trials) cfg["trials"] = *trials;
    if (threads) cfg["threads"] = *threads;
    if (!mu_neg.empty()) {
      json list = json::array();
      for (const auto& m : mu_neg) list.push_back(parse_vector(m));
      cfg["mu_neg_list"] = list;
    }
    if (!b_list.empty()) cfg["b_list"] = b_list;
    if (!c_list.empty()) cfg["c_list"] = c_list;
    if (epochs) cfg["adam"]["epochs"] = *epochs;
    if (lr) cfg["adam"]["learning_rate"] = *lr;
    if (floor) cfg["confidence"]["floor"] = *floor;
    if (family) cfg["tune"]["family"] = *family;
    if (k_grid_min) cfg["tune"]["k_grid_min"] = *k_grid_min;
    if (k_grid_max) cfg["tune"]["k_grid_max"] = *k_grid_max;
    if (k_grid_points) cfg["tune"]["k_grid_points"] = *k_grid_points;
    if (model_kind) cfg["model"]["kind"] = *model_kind;
    if (bandwidth) cfg["model"]["bandwidth"] = *bandwidth;
    return cfg;
  }

  void run() const {
    const json cfg = effective_config();
    if (print_config) {
      std::cout << cfg.dump(2) << '\n';
      return;
    }
    const std::string dir = output_dir.empty() ? "results/" + kind : output_dir;
    check(pconf_experiment_run(kind.c_str(), cfg.dump().c_str(), dir.c_str()));
    std::cerr << "wrote " << dir << "/results.csv\n";
  }
};

// ---- train -----------------------------------------------------------------

struct TrainCommand {
  std::string data, out, loss_path;
  std::optional<double> k;
  std::string family = "power";
  std::optional<double> floor;
  bool supervised = false;
  TrainOptions opts;

  void attach(CLI::App* app) {
    app->add_option("--data", data, "Training CSV (confidence column for Pconf, label column for supervised)")
        ->required();
    app->add_option("--out", out, "Model JSON path")->required();
    app->add_flag("--supervised", supervised, "Fit the supervised logistic baseline on labeled data");
    app->add_option("--k", k, "Confidence adjustment parameter (omit for raw confidence)");
    app->add_option("--adjust-family", family)->check(CLI::IsMember({"power", "additive"}));
    app->add_option("--floor", floor, "Clipping floor applied after adjustment");
    app->add_option("--loss-trajectory", loss_path, "Write per-epoch loss as CSV (epoch,loss)");
    opts.attach(app);
  }

  void run() const {
    Dataset d = load_dataset(data);
    const pconf_adam_config adam = opts.adam();
    const pconf_model_spec spec = opts.spec();
    pconf_model* raw = nullptr;
    const bool use_supervised = supervised || !pconf_dataset_has_confidence(d.get());
    if (use_supervised) {
      if (k) throw UsageError{"--k applies to confidence-weighted training only"};
      check(pconf_train_supervised(d.get(), &adam, &spec, &raw));
    } else {
      pconf_adjustment adj = pconf_adjustment_default();
      adj.family = parse_family(family);
      if (floor) adj.floor = *floor;
      const bool adjusted = k.has_value() || floor.has_value();
      if (k) adj.k = *k;
      if (adj.family == PCONF_ADJUST_ADDITIVE && !k) adj.k = 0.0;
      check(pconf_train_pconf(d.get(), adjusted ? &adj : nullptr, &adam, &spec, &raw));
    }
    Model m(raw);
    check(pconf_model_save(m.get(), out.c_str()));
    if (!loss_path.empty()) {
      std::vector<double> loss(pconf_model_loss_count(m.get()));
      check(pconf_model_loss(m.get(), loss.data()));
      std::string csv = "epoch,loss\n";
      for (std::size_t i = 0; i < loss.size(); ++i) csv += std::to_string(i) + ',' + num(loss[i]) + '\n';
      write_file(loss_path, csv);
    }
  }
};

// ---- predict ---------------------------------------------------------------

struct PredictCommand {
  std::string model, data, out;
  bool with_score = false;

  void attach(CLI::App* app) {
    app->add_option("--model", model, "Model JSON")->required();
    app->add_option("--data", data, "Input CSV")->required();
    app->add_option("--out", out, "Output CSV (input columns plus prediction)")->required();
    app->add_flag("--score", with_score, "Also write the raw score column");
  }

  void run() const {
    Model m = load_model(model);
    Dataset d = load_dataset(data);
    const std::size_t rows = pconf_dataset_rows(d.get());
    const std::size_t dim = pconf_dataset_dim(d.get());
    std::vector<double> x(rows * dim);
    check(pconf_dataset_features(d.get(), x.data()));
    std::vector<int> labels;
    std::vector<double> conf;
    if (pconf_dataset_has_labels(d.get())) {
      labels.resize(rows);
      check(pconf_dataset_labels(d.get(), labels.data()));
    }
    if (pconf_dataset_has_confidence(d.get())) {
      conf.resize(rows);
      check(pconf_dataset_confidence(d.get(), conf.data()));
    }
    std::vector<int> pred(rows);
    check(pconf_model_predict_dataset(m.get(), d.get(), pred.data()));
    std::vector<double> scores;
    if (with_score) {
      scores.resize(rows);
      check(pconf_model_score_dataset(m.get(), d.get(), scores.data()));
    }

    std::string csv;
    for (std::size_t j = 0; j < dim; ++j) csv += (j ? ",f" : "f") + std::to_string(j);
    if (!labels.empty()) csv += ",label";
    if (!conf.empty()) csv += ",confidence";
    if (with_score) csv += ",score";
    csv += ",prediction\n";
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < dim; ++j) csv += (j ? "," : "") + num(x[i * dim + j]);
      if (!labels.empty()) csv += ',' + std::to_string(labels[i]);
      if (!conf.empty()) csv += ',' + num(conf[i]);
      if (with_score) csv += ',' + num(scores[i]);
      csv += ',' + std::to_string(pred[i]) + '\n';
    }
    write_file(out, csv);
    if (!labels.empty()) {
      double acc = 0.0;
      check(pconf_accuracy(m.get(), d.get(), &acc));
      std::cerr << "accuracy " << num(100.0 * acc) << "%\n";
    }
  }
};

// ---- tune-k ----------------------------------------------------------------

struct TuneCommand {
  std::string train, valid, out, curve, model_out;
  std::optional<double> phi;
  double phi_multiplier = 1.0;
  double k_min = 0.125, k_max = 8.0;
  std::size_t k_points = 25;
  std::vector<double> grid;
  std::string family = "power";
  std::optional<double> floor;
  std::size_t threads = 1;
  TrainOptions opts;

  void attach(CLI::App* app) {
    app->add_option("--train", train, "CSV with confidence column")->required();
    app->add_option("--valid", valid, "CSV of validation positives")->required();
    app->add_option("--phi", phi, "Target false-negative rate in [0, 1]")->required();
    app->add_option("--phi-multiplier", phi_multiplier, "Scale applied to --phi");
    app->add_option("--k-grid-min", k_min);
    app->add_option("--k-grid-max", k_max);
    app->add_option("--k-grid-points", k_points);
    app->add_option("--grid", grid, "Explicit candidate list, overrides the k-grid flags")->delimiter(',');
    app->add_option("--adjust-family", family)->check(CLI::IsMember({"power", "additive"}));
    app->add_option("--floor", floor);
    app->add_option("--threads", threads, "Worker threads, 0 = all cores");
    app->add_option("--out", out, "TuneResult JSON path")->required();
    app->add_option("--curve", curve, "Objective curve CSV (k,fn_rate,squared_error)");
    app->add_option("--model-out", model_out, "Model JSON of the selected k");
    opts.attach(app);
  }

  std::vector<double> candidates() const {
    if (!grid.empty()) return grid;
    if (k_points == 0) throw UsageError{"--k-grid-points must be positive"};
    std::vector<double> g(k_points);
    if (k_points == 1) {
      g[0] = k_min;
      return g;
    }
    for (std::size_t i = 0; i < k_points; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(k_points - 1);
      if (family == "power") {
        if (k_min <= 0.0) throw UsageError{"power-family grid bounds must be positive"};
        g[i] = std::exp2(std::log2(k_min) + t * (std::log2(k_max) - std::log2(k_min)));
      } else {
        g[i] = k_min + t * (k_max - k_min);
      }
    }
    g.back() = k_max;
    return g;
  }

  void run() const {
    Dataset tr = load_dataset(train);
    Dataset va = load_dataset(valid);
    const std::vector<double> g = candidates();
    pconf_tune_config cfg = pconf_tune_config_default();
    cfg.phi = *phi * phi_multiplier;
    cfg.grid = g.data();
    cfg.grid_size = g.size();
    cfg.family = parse_family(family);
    if (floor) cfg.floor = *floor;
    cfg.adam = opts.adam();
    cfg.model = opts.spec();
    cfg.threads = threads;
    pconf_tune_result* raw = nullptr;
    check(pconf_tune_k(tr.get(), va.get(), &cfg, &raw));
    Tuned r(raw);
    char* text = nullptr;
    check(pconf_tune_result_to_json(r.get(), &text));
    write_file(out, std::string(CString(text).get()) + '\n');
    if (!curve.empty()) {
      std::string csv = "k,fn_rate,squared_error\n";
      for (std::size_t i = 0; i < pconf_tune_result_count(r.get()); ++i) {
        double k = 0, fn = 0, se = 0;
        int failed = 0;
        check(pconf_tune_result_entry(r.get(), i, &k, &fn, &se, &failed));
        csv += num(k) + ',' + (failed ? "" : num(fn)) + ',' + (failed ? "" : num(se)) + '\n';
      }
      write_file(curve, csv);
    }
    if (!model_out.empty()) {
      pconf_model* m = nullptr;
      check(pconf_tune_result_model(r.get(), &m));
      Model owned(m);
      check(pconf_model_save(owned.get(), model_out.c_str()));
    }
    std::cout << "k_star " << num(pconf_tune_result_k_star(r.get())) << '\n';
  }
};

// ---- plot ------------------------------------------------------------------

struct PlotCommand {
  std::vector<std::string> models, names;
  std::string data, out;

  void attach(CLI::App* app) {
    app->add_option("--model", models, "Linear model JSON (repeatable)")->required();
    app->add_option("--name", names, "Legend name per --model (defaults to the file name)");
    app->add_option("--data", data, "Labeled 2-D CSV to scatter")->required();
    app->add_option("--out", out, "SVG path")->required();
  }

  void run() const {
    if (!names.empty() && names.size() != models.size()) {
      throw UsageError{"--name must be given once per --model"};
    }
    std::vector<Model> owned;
    std::vector<const pconf_model*> ptrs;
    std::vector<const char*> labels;
    for (const auto& path : models) {
      owned.push_back(load_model(path));
      ptrs.push_back(owned.back().get());
    }
    for (std::size_t i = 0; i < models.size(); ++i) labels.push_back(names.empty() ? models[i].c_str() : names[i].c_str());
    Dataset d = load_dataset(data);
    check(pconf_plot_boundary_svg(ptrs.data(), labels.data(), ptrs.size(), d.get(), out.c_str()));
  }
};

// ---- generate --------------------------------------------------------------

struct GenerateCommand {
  std::string mu_pos = "0,0", mu_neg = "1,1";
  std::size_t n = 1000;
  double skew_b = 1.0;
  std::uint64_t seed = 0;
  std::string output_dir;

  void attach(CLI::App* app) {
    app->add_option("--mu-pos", mu_pos, "Positive-class mean");
    app->add_option("--mu-neg", mu_neg, "Negative-class mean");
    app->add_option("--n", n, "Rows per class and split");
    app->add_option("--skew-b", skew_b, "Skew exponent applied to the estimated confidence");
    app->add_option("--seed", seed);
    app->add_option("--output-dir", output_dir)->required();
  }

  void run() const {
    const auto pos = parse_vector(mu_pos);
    const auto neg = parse_vector(mu_neg);
    if (pos.size() != neg.size()) throw UsageError{"--mu-pos and --mu-neg differ in dimension"};
    check(pconf_generate_synthetic(pos.data(), neg.data(), pos.size(), n, skew_b, seed, output_dir.c_str()));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning from positive data with confidence"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pconf_version()));

  ExperimentOptions overlap;
  overlap.kind = "overlap";
  overlap.attach(app.add_subcommand("synth-overlap", "Class-overlap and confidence-skew sweep"), false);
  ExperimentOptions phi_error;
  phi_error.kind = "phi-error";
  phi_error.attach(app.add_subcommand("synth-phi-error", "Sensitivity to the phi estimate"), true);
  TrainCommand train;
  train.attach(app.add_subcommand("train", "Fit a model on a CSV file"));
  PredictCommand predict;
  predict.attach(app.add_subcommand("predict", "Append predictions to a CSV file"));
  TuneCommand tune;
  tune.attach(app.add_subcommand("tune-k", "Select the confidence adjustment k against phi"));
  PlotCommand plot;
  plot.attach(app.add_subcommand("plot", "Decision boundaries of linear models as SVG"));
  GenerateCommand generate;
  generate.attach(app.add_subcommand("generate", "Write synthetic Gaussian splits as CSV files"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "synth-overlap") overlap.run();
    else if (name == "synth-phi-error") phi_error.run();
    else if (name == "train") train.run();
    else if (name == "predict") predict.run();
    else if (name == "tune-k") tune.run();
    else if (name == "plot") plot.run();
    else if (name == "generate") generate.run();
    return kOk;
  } catch (const ApiFailure& f) {
    std::cerr << "pconf: " << pconf_status_string(f.status) << ": " << f.message << '\n';
    return exit_code(f.status);
  } catch (const UsageError& e) {
    std::cerr << "pconf: " << e.message << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "pconf: internal error: " << e.what() << '\n';
    return kInternal;
  }
}
