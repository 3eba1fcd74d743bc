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

#include "pconf/pconf.h"

#include "pconf/confidence.hpp"
#include "pconf/data.hpp"
#include "pconf/eval.hpp"
#include "pconf/experiment.hpp"
#include "pconf/model.hpp"
#include "pconf/plot.hpp"
#include "pconf/risk.hpp"
#include "pconf/tune.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

struct pconf_dataset {
  pconf::CsvTable table;
};

struct pconf_model {
  pconf::ScorerModel model;
  std::vector<double> loss_trajectory;
};

struct pconf_tune_result {
  pconf::TuneResult result;
};

namespace {

thread_local std::string g_last_error;

pconf_status status_of(pconf::ErrorCode code) {
  switch (code) {
    case pconf::ErrorCode::Contract: return PCONF_ERR_INVALID_ARGUMENT;
    case pconf::ErrorCode::InvalidSpec: return PCONF_ERR_INVALID_SPEC;
    case pconf::ErrorCode::InvalidData: return PCONF_ERR_INVALID_DATA;
    case pconf::ErrorCode::Parse: return PCONF_ERR_PARSE;
    case pconf::ErrorCode::Io: return PCONF_ERR_IO;
    case pconf::ErrorCode::Diverged: return PCONF_ERR_DIVERGED;
    case pconf::ErrorCode::Tuning: return PCONF_ERR_TUNING;
    case pconf::ErrorCode::UnsupportedPlot: return PCONF_ERR_UNSUPPORTED;
  }
  return PCONF_ERR_INTERNAL;
}

pconf_status set_error(pconf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
pconf_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PCONF_OK;
  } catch (const pconf::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(PCONF_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PCONF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PCONF_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(PCONF_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) pconf::fail(pconf::ErrorCode::Contract, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pconf::LabeledDataset labeled(const pconf_dataset* data) {
  need(data, "dataset");
  if (!data->table.labels) pconf::fail(pconf::ErrorCode::InvalidData, "dataset has no label column");
  pconf::LabeledDataset out{data->table.features, *data->table.labels};
  out.validate();
  return out;
}

pconf::PconfDataset with_confidence(const pconf_dataset* data) {
  need(data, "dataset");
  if (!data->table.confidence) pconf::fail(pconf::ErrorCode::InvalidData, "dataset has no confidence column");
  pconf::PconfDataset out{data->table.features, *data->table.confidence};
  out.validate();
  return out;
}

pconf::AdamConfig adam_of(const pconf_adam_config* c) {
  if (c == nullptr) return pconf::overlap_preset(false).adam;
  pconf::AdamConfig a;
  a.learning_rate = c->learning_rate;
  a.beta1 = c->beta1;
  a.beta2 = c->beta2;
  a.epsilon = c->epsilon;
  a.epochs = c->epochs;
  a.weight_decay = c->weight_decay;
  a.validate();
  return a;
}

pconf::ModelSpec spec_of(const pconf_model_spec* s) {
  pconf::ModelSpec m;
  if (s == nullptr) return m;
  if (s->kind != PCONF_MODEL_LINEAR && s->kind != PCONF_MODEL_KERNEL) {
    pconf::fail(pconf::ErrorCode::InvalidSpec, "unknown model kind");
  }
  m.kind = s->kind == PCONF_MODEL_LINEAR ? pconf::ModelKind::Linear : pconf::ModelKind::Kernel;
  m.bandwidth = s->bandwidth;
  if (m.kind == pconf::ModelKind::Kernel) {
    pconf::require(m.bandwidth > 0.0, pconf::ErrorCode::InvalidSpec, "kernel bandwidth must be positive");
  }
  return m;
}

pconf::AdjustFamily family_of(pconf_adjust_family f) {
  if (f == PCONF_ADJUST_POWER) return pconf::AdjustFamily::Power;
  if (f == PCONF_ADJUST_ADDITIVE) return pconf::AdjustFamily::Additive;
  pconf::fail(pconf::ErrorCode::InvalidSpec, "unknown adjustment family");
}

pconf::AdjustmentSpec adjustment_of(const pconf_adjustment* a) {
  pconf::AdjustmentSpec s;
  s.family = family_of(a->family);
  s.k = a->k;
  s.floor = a->floor;
  s.validate();
  return s;
}

pconf::ExperimentConfig preset(const std::string& kind, bool fast) {
  if (kind == "overlap") return pconf::overlap_preset(fast);
  if (kind == "phi-error") return pconf::phi_error_preset(fast);
  pconf::fail(pconf::ErrorCode::InvalidSpec, "unknown experiment kind '" + kind + "'");
}

}  // namespace

extern "C" {

const char* pconf_version(void) { return "0.1.0"; }

const char* pconf_status_string(pconf_status status) {
  switch (status) {
    case PCONF_OK: return "ok";
    case PCONF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PCONF_ERR_INVALID_SPEC: return "invalid specification";
    case PCONF_ERR_INVALID_DATA: return "invalid data";
    case PCONF_ERR_PARSE: return "parse error";
    case PCONF_ERR_IO: return "i/o error";
    case PCONF_ERR_DIVERGED: return "optimization diverged";
    case PCONF_ERR_TUNING: return "tuning failed";
    case PCONF_ERR_UNSUPPORTED: return "unsupported";
    case PCONF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pconf_last_error(void) { return g_last_error.c_str(); }

void pconf_string_free(char* s) { std::free(s); }

// ---- datasets --------------------------------------------------------------

pconf_status pconf_dataset_load_csv(const char* path, pconf_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new pconf_dataset{pconf::read_csv_table(path)};
  });
}

pconf_status pconf_dataset_create(const double* features, size_t rows, size_t dim, const int* labels,
                                  const double* confidence, pconf_dataset** out) {
  return guarded([&] {
    need(out, "out");
    pconf::require(rows > 0 && dim > 0, pconf::ErrorCode::InvalidData, "dataset needs at least one row and column");
    need(features, "features");
    pconf::CsvTable t;
    t.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        features, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
    if (labels) {
      t.labels = std::vector<int>(labels, labels + rows);
      pconf::LabeledDataset{t.features, *t.labels}.validate();
    }
    if (confidence) {
      t.confidence = Eigen::Map<const pconf::Vector>(confidence, static_cast<Eigen::Index>(rows));
      pconf::PconfDataset{t.features, *t.confidence}.validate();
    }
    pconf::require(t.features.allFinite(), pconf::ErrorCode::InvalidData, "non-finite feature value");
    *out = new pconf_dataset{std::move(t)};
  });
}

void pconf_dataset_free(pconf_dataset* data) { delete data; }

size_t pconf_dataset_rows(const pconf_dataset* data) {
  return data ? static_cast<size_t>(data->table.features.rows()) : 0;
}

size_t pconf_dataset_dim(const pconf_dataset* data) {
  return data ? static_cast<size_t>(data->table.features.cols()) : 0;
}

int pconf_dataset_has_labels(const pconf_dataset* data) { return data && data->table.labels ? 1 : 0; }

int pconf_dataset_has_confidence(const pconf_dataset* data) { return data && data->table.confidence ? 1 : 0; }

pconf_status pconf_dataset_features(const pconf_dataset* data, double* out) {
  return guarded([&] {
    need(data, "dataset");
    need(out, "out");
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out, data->table.features.rows(), data->table.features.cols()) = data->table.features;
  });
}

pconf_status pconf_dataset_labels(const pconf_dataset* data, int* out) {
  return guarded([&] {
    need(out, "out");
    const auto d = labeled(data);
    std::copy(d.labels.begin(), d.labels.end(), out);
  });
}

pconf_status pconf_dataset_confidence(const pconf_dataset* data, double* out) {
  return guarded([&] {
    need(out, "out");
    const auto d = with_confidence(data);
    std::copy(d.confidence.data(), d.confidence.data() + d.confidence.size(), out);
  });
}

pconf_status pconf_dataset_write_csv(const pconf_dataset* data, const char* path) {
  return guarded([&] {
    need(data, "dataset");
    need(path, "path");
    pconf::write_csv_table(data->table, path);
  });
}

pconf_status pconf_generate_synthetic(const double* mu_pos, const double* mu_neg, size_t dim, size_t n_per_split,
                                      double skew_b, uint64_t seed, const char* output_dir) {
  return guarded([&] {
    need(mu_pos, "mu_pos");
    need(mu_neg, "mu_neg");
    need(output_dir, "output_dir");
    pconf::require(dim > 0, pconf::ErrorCode::InvalidSpec, "dimension must be positive");
    pconf::require(n_per_split > 0, pconf::ErrorCode::InvalidSpec, "split size must be positive");
    pconf::ExperimentConfig cfg = pconf::overlap_preset(false);
    cfg.mu_pos = Eigen::Map<const pconf::Vector>(mu_pos, static_cast<Eigen::Index>(dim));
    const pconf::Vector neg = Eigen::Map<const pconf::Vector>(mu_neg, static_cast<Eigen::Index>(dim));
    cfg.mu_neg_list = {neg};
    cfg.split.n_train_pos = cfg.split.n_train_neg = cfg.split.n_valid_pos = n_per_split;
    cfg.split.n_test_pos = cfg.split.n_test_neg = n_per_split;
    cfg.split.n_confest_pos = cfg.split.n_confest_neg = n_per_split;
    cfg.split.seed = seed;
    cfg.validate();
    const pconf::SyntheticTrial trial = pconf::make_synthetic_trial(cfg, neg, 0);
    const pconf::PconfDataset train = pconf::skewed_dataset(trial, skew_b, cfg.floor);

    const std::filesystem::path dir(output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) pconf::fail(pconf::ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
    pconf::write_csv(trial.splits.train, (dir / "train.csv").string());
    pconf::write_csv_table(pconf::CsvTable{trial.splits.valid_pos, std::nullopt, std::nullopt},
                           (dir / "valid_pos.csv").string());
    pconf::write_csv(trial.splits.test, (dir / "test.csv").string());
    pconf::write_csv(trial.splits.conf_est, (dir / "conf_est.csv").string());
    pconf::write_csv(train, (dir / "train_pconf.csv").string());
  });
}

// ---- training --------------------------------------------------------------

pconf_adam_config pconf_adam_config_default(void) {
  const pconf::AdamConfig a = pconf::overlap_preset(false).adam;
  return {a.learning_rate, a.beta1, a.beta2, a.epsilon, a.epochs, a.weight_decay};
}

pconf_model_spec pconf_model_spec_default(void) { return {PCONF_MODEL_LINEAR, 1.0}; }

pconf_adjustment pconf_adjustment_default(void) { return {PCONF_ADJUST_POWER, 1.0, pconf::kDefaultFloor}; }

pconf_status pconf_train_pconf(const pconf_dataset* data, const pconf_adjustment* adjustment,
                               const pconf_adam_config* adam, const pconf_model_spec* spec, pconf_model** out) {
  return guarded([&] {
    need(out, "out");
    pconf::PconfDataset d = with_confidence(data);
    if (adjustment) d.confidence = pconf::adjust_all(d.confidence, adjustment_of(adjustment));
    pconf::TrainedModel t = pconf::train_pconf(d, adam_of(adam), spec_of(spec));
    *out = new pconf_model{std::move(t.model), std::move(t.loss_trajectory)};
  });
}

pconf_status pconf_train_supervised(const pconf_dataset* data, const pconf_adam_config* adam,
                                    const pconf_model_spec* spec, pconf_model** out) {
  return guarded([&] {
    need(out, "out");
    pconf::TrainedModel t = pconf::train_supervised(labeled(data), adam_of(adam), spec_of(spec));
    *out = new pconf_model{std::move(t.model), std::move(t.loss_trajectory)};
  });
}

// ---- models ----------------------------------------------------------------

void pconf_model_free(pconf_model* model) { delete model; }

pconf_model_kind pconf_model_get_kind(const pconf_model* model) {
  return model && std::holds_alternative<pconf::KernelModel>(model->model) ? PCONF_MODEL_KERNEL : PCONF_MODEL_LINEAR;
}

size_t pconf_model_input_dim(const pconf_model* model) { return model ? pconf::input_dim(model->model) : 0; }

size_t pconf_model_loss_count(const pconf_model* model) { return model ? model->loss_trajectory.size() : 0; }

pconf_status pconf_model_loss(const pconf_model* model, double* out) {
  return guarded([&] {
    need(model, "model");
    if (!model->loss_trajectory.empty()) need(out, "out");
    std::copy(model->loss_trajectory.begin(), model->loss_trajectory.end(), out);
  });
}

pconf_status pconf_model_load(const char* path, pconf_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new pconf_model{pconf::load_model(path), {}};
  });
}

pconf_status pconf_model_save(const pconf_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    pconf::save_model(model->model, path);
  });
}

pconf_status pconf_model_to_json(const pconf_model* model, char** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = dup_string(pconf::to_json(model->model).dump(2));
  });
}

pconf_status pconf_model_from_json(const char* json, pconf_model** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new pconf_model{pconf::model_from_json(nlohmann::json::parse(json)), {}};
  });
}

pconf_status pconf_model_score(const pconf_model* model, const double* x, size_t dim, double* out) {
  return guarded([&] {
    need(model, "model");
    need(x, "x");
    need(out, "out");
    *out = pconf::score(model->model, Eigen::Map<const pconf::Vector>(x, static_cast<Eigen::Index>(dim)));
  });
}

pconf_status pconf_model_score_dataset(const pconf_model* model, const pconf_dataset* data, double* out) {
  return guarded([&] {
    need(model, "model");
    need(data, "dataset");
    need(out, "out");
    const pconf::Vector s = pconf::score_all(model->model, data->table.features);
    std::copy(s.data(), s.data() + s.size(), out);
  });
}

pconf_status pconf_model_predict_dataset(const pconf_model* model, const pconf_dataset* data, int* out) {
  return guarded([&] {
    need(model, "model");
    need(data, "dataset");
    need(out, "out");
    const auto p = pconf::predict_all(model->model, data->table.features);
    std::copy(p.begin(), p.end(), out);
  });
}

// ---- evaluation ------------------------------------------------------------

pconf_status pconf_accuracy(const pconf_model* model, const pconf_dataset* data, double* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = pconf::accuracy(model->model, labeled(data));
  });
}

pconf_status pconf_fn_rate(const pconf_model* model, const pconf_dataset* data, double* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = pconf::fn_rate(model->model, labeled(data));
  });
}

pconf_status pconf_empirical_fn_rate(const pconf_model* model, const pconf_dataset* positives, double* out) {
  return guarded([&] {
    need(model, "model");
    need(positives, "dataset");
    need(out, "out");
    *out = pconf::empirical_fn_rate(model->model, positives->table.features);
  });
}

// ---- confidence helpers ----------------------------------------------------

pconf_status pconf_adjust(double r, const pconf_adjustment* adjustment, double* out) {
  return guarded([&] {
    need(adjustment, "adjustment");
    need(out, "out");
    *out = pconf::adjust(r, adjustment_of(adjustment));
  });
}

pconf_status pconf_skew(double r, double b, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = pconf::skew(r, pconf::SkewSpec{b});
  });
}

pconf_status pconf_confidence_from_drowsiness(int d1, int d2, int d3, double floor, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = pconf::confidence_from_drowsiness(d1, d2, d3, floor);
  });
}

// ---- k tuning --------------------------------------------------------------

pconf_tune_config pconf_tune_config_default(void) {
  return {0.0, nullptr, 0, PCONF_ADJUST_POWER, pconf::kDefaultFloor, pconf_adam_config_default(),
          pconf_model_spec_default(), 1};
}

pconf_status pconf_tune_k(const pconf_dataset* train, const pconf_dataset* valid_pos, const pconf_tune_config* cfg,
                          pconf_tune_result** out) {
  return guarded([&] {
    need(cfg, "config");
    need(valid_pos, "valid_pos");
    need(out, "out");
    pconf::TuneConfig t;
    t.phi = cfg->phi;
    if (cfg->grid != nullptr) {
      t.grid.assign(cfg->grid, cfg->grid + cfg->grid_size);
    } else if (cfg->family == PCONF_ADJUST_ADDITIVE) {
      t.grid = pconf::linear_grid(-0.5, 0.5, 21);
    }
    t.family = family_of(cfg->family);
    t.floor = cfg->floor;
    t.adam = adam_of(&cfg->adam);
    t.model = spec_of(&cfg->model);
    t.threads = cfg->threads;
    t.validate();
    *out = new pconf_tune_result{pconf::tune_k(with_confidence(train), valid_pos->table.features, t)};
  });
}

void pconf_tune_result_free(pconf_tune_result* result) { delete result; }

double pconf_tune_result_k_star(const pconf_tune_result* result) { return result ? result->result.k_star : 0.0; }

size_t pconf_tune_result_count(const pconf_tune_result* result) {
  return result ? result->result.objective_values.size() : 0;
}

pconf_status pconf_tune_result_entry(const pconf_tune_result* result, size_t index, double* k, double* fn_rate,
                                     double* squared_error, int* failed) {
  return guarded([&] {
    need(result, "result");
    pconf::require(index < result->result.objective_values.size(), pconf::ErrorCode::Contract,
                   "tune entry index out of range");
    const auto& c = result->result.objective_values[index];
    if (k) *k = c.k;
    if (fn_rate) *fn_rate = c.fn_rate;
    if (squared_error) *squared_error = c.squared_error;
    if (failed) *failed = c.failed ? 1 : 0;
  });
}

pconf_status pconf_tune_result_model(const pconf_tune_result* result, pconf_model** out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    *out = new pconf_model{result->result.model, {}};
  });
}

pconf_status pconf_tune_result_to_json(const pconf_tune_result* result, char** out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    nlohmann::json values = nlohmann::json::array();
    for (const auto& c : result->result.objective_values) {
      nlohmann::json entry = {{"k", c.k}, {"failed", c.failed}};
      if (c.failed) {
        entry["failure"] = c.failure;
      } else {
        entry["fn_rate"] = c.fn_rate;
        entry["squared_error"] = c.squared_error;
      }
      values.push_back(std::move(entry));
    }
    const nlohmann::json doc = {
        {"k_star", result->result.k_star}, {"objective_values", values}, {"model", pconf::to_json(result->result.model)}};
    *out = dup_string(doc.dump(2));
  });
}

// ---- plotting --------------------------------------------------------------

pconf_status pconf_plot_boundary_svg(const pconf_model* const* models, const char* const* names, size_t count,
                                     const pconf_dataset* data, const char* path) {
  return guarded([&] {
    need(path, "path");
    if (count > 0) {
      need(models, "models");
      need(names, "names");
    }
    std::vector<pconf::NamedModel> named;
    for (size_t i = 0; i < count; ++i) {
      need(models[i], "model");
      need(names[i], "name");
      named.push_back({names[i], models[i]->model});
    }
    pconf::plot_boundary_svg(named, labeled(data), path);
  });
}

// ---- experiments -----------------------------------------------------------

pconf_status pconf_experiment_default_config(const char* kind, int fast, char** out_json) {
  return guarded([&] {
    need(kind, "kind");
    need(out_json, "out");
    *out_json = dup_string(pconf::to_json(preset(kind, fast != 0)).dump(2));
  });
}

pconf_status pconf_experiment_run(const char* kind, const char* config_json, const char* output_dir) {
  return guarded([&] {
    need(kind, "kind");
    need(output_dir, "output_dir");
    const std::string k = kind;
    pconf::ExperimentConfig cfg = preset(k, false);
    if (config_json != nullptr && *config_json != '\0') {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::exception& e) {
        pconf::fail(pconf::ErrorCode::Parse, std::string("experiment config: ") + e.what());
      }
      cfg = pconf::experiment_config_from_json(doc, cfg);
    }
    if (k == "overlap") {
      pconf::run_overlap_experiment(cfg, output_dir);
    } else {
      pconf::run_phi_error_experiment(cfg, output_dir);
    }
  });
}

}  // extern "C"
