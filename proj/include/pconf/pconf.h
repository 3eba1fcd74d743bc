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

/* C interface to the pconf library.
 *
 * Objects are opaque handles released with their matching *_free function.
 * Every fallible call returns a pconf_status; on failure the message of the
 * most recent error on the calling thread is available from
 * pconf_last_error(). Strings returned through char** out-parameters are
 * owned by the caller and released with pconf_string_free().
 */

#ifndef PCONF_PCONF_H
#define PCONF_PCONF_H

#include <stddef.h>
#include <stdint.h>

#if defined(PCONF_BUILDING_LIBRARY)
#define PCONF_API __attribute__((visibility("default")))
#else
#define PCONF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pconf_status {
  PCONF_OK = 0,
  PCONF_ERR_INVALID_ARGUMENT = 1, /* null handle, bad index, broken precondition */
  PCONF_ERR_INVALID_SPEC = 2,
  PCONF_ERR_INVALID_DATA = 3,
  PCONF_ERR_PARSE = 4,
  PCONF_ERR_IO = 5,
  PCONF_ERR_DIVERGED = 6,
  PCONF_ERR_TUNING = 7,
  PCONF_ERR_UNSUPPORTED = 8,
  PCONF_ERR_INTERNAL = 9
} pconf_status;

typedef struct pconf_dataset pconf_dataset;
typedef struct pconf_model pconf_model;
typedef struct pconf_tune_result pconf_tune_result;

PCONF_API const char* pconf_version(void);
PCONF_API const char* pconf_status_string(pconf_status status);
/* Empty string when the calling thread has not seen an error. */
PCONF_API const char* pconf_last_error(void);
PCONF_API void pconf_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

/* Reads a CSV with f0..f{d-1} columns plus `label` and/or `confidence`. */
PCONF_API pconf_status pconf_dataset_load_csv(const char* path, pconf_dataset** out);
/* Row-major features; labels (+1/-1) and confidence may each be NULL. */
PCONF_API pconf_status pconf_dataset_create(const double* features, size_t rows, size_t dim, const int* labels,
                                            const double* confidence, pconf_dataset** out);
PCONF_API void pconf_dataset_free(pconf_dataset* data);
PCONF_API size_t pconf_dataset_rows(const pconf_dataset* data);
PCONF_API size_t pconf_dataset_dim(const pconf_dataset* data);
PCONF_API int pconf_dataset_has_labels(const pconf_dataset* data);
PCONF_API int pconf_dataset_has_confidence(const pconf_dataset* data);
/* Copies rows*dim row-major values into `out`. */
PCONF_API pconf_status pconf_dataset_features(const pconf_dataset* data, double* out);
PCONF_API pconf_status pconf_dataset_labels(const pconf_dataset* data, int* out);
PCONF_API pconf_status pconf_dataset_confidence(const pconf_dataset* data, double* out);
PCONF_API pconf_status pconf_dataset_write_csv(const pconf_dataset* data, const char* path);

/* Draws train / valid_pos / test / conf_est splits from two unit-covariance
 * Gaussians and writes them as CSV files in `output_dir`, together with
 * train_pconf.csv (training positives with estimated, clipped confidence
 * skewed by `skew_b`). */
PCONF_API pconf_status pconf_generate_synthetic(const double* mu_pos, const double* mu_neg, size_t dim,
                                                size_t n_per_split, double skew_b, uint64_t seed,
                                                const char* output_dir);

/* ---- training ---------------------------------------------------------- */

typedef struct pconf_adam_config {
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  size_t epochs;
  double weight_decay;
} pconf_adam_config;

typedef enum pconf_model_kind { PCONF_MODEL_LINEAR = 0, PCONF_MODEL_KERNEL = 1 } pconf_model_kind;

typedef struct pconf_model_spec {
  pconf_model_kind kind;
  double bandwidth;
} pconf_model_spec;

typedef enum pconf_adjust_family { PCONF_ADJUST_POWER = 0, PCONF_ADJUST_ADDITIVE = 1 } pconf_adjust_family;

typedef struct pconf_adjustment {
  pconf_adjust_family family;
  double k;
  double floor;
} pconf_adjustment;

PCONF_API pconf_adam_config pconf_adam_config_default(void);
PCONF_API pconf_model_spec pconf_model_spec_default(void);
PCONF_API pconf_adjustment pconf_adjustment_default(void);

/* Trains on positives with confidence. `adjustment` may be NULL (raw
 * confidence). */
PCONF_API pconf_status pconf_train_pconf(const pconf_dataset* data, const pconf_adjustment* adjustment,
                                         const pconf_adam_config* adam, const pconf_model_spec* spec,
                                         pconf_model** out);
PCONF_API pconf_status pconf_train_supervised(const pconf_dataset* data, const pconf_adam_config* adam,
                                              const pconf_model_spec* spec, pconf_model** out);

/* ---- models ------------------------------------------------------------ */

PCONF_API void pconf_model_free(pconf_model* model);
PCONF_API pconf_model_kind pconf_model_get_kind(const pconf_model* model);
PCONF_API size_t pconf_model_input_dim(const pconf_model* model);
/* Number of recorded loss values (0 for loaded models). */
PCONF_API size_t pconf_model_loss_count(const pconf_model* model);
PCONF_API pconf_status pconf_model_loss(const pconf_model* model, double* out);
PCONF_API pconf_status pconf_model_load(const char* path, pconf_model** out);
PCONF_API pconf_status pconf_model_save(const pconf_model* model, const char* path);
PCONF_API pconf_status pconf_model_to_json(const pconf_model* model, char** out);
PCONF_API pconf_status pconf_model_from_json(const char* json, pconf_model** out);
PCONF_API pconf_status pconf_model_score(const pconf_model* model, const double* x, size_t dim, double* out);
/* Writes one score / one +1/-1 prediction per dataset row. */
PCONF_API pconf_status pconf_model_score_dataset(const pconf_model* model, const pconf_dataset* data, double* out);
PCONF_API pconf_status pconf_model_predict_dataset(const pconf_model* model, const pconf_dataset* data, int* out);

/* ---- evaluation -------------------------------------------------------- */

PCONF_API pconf_status pconf_accuracy(const pconf_model* model, const pconf_dataset* labeled, double* out);
PCONF_API pconf_status pconf_fn_rate(const pconf_model* model, const pconf_dataset* labeled, double* out);
/* Fraction of dataset rows predicted negative (rows are taken as positives). */
PCONF_API pconf_status pconf_empirical_fn_rate(const pconf_model* model, const pconf_dataset* positives,
                                               double* out);

/* ---- confidence helpers ------------------------------------------------ */

PCONF_API pconf_status pconf_adjust(double r, const pconf_adjustment* adjustment, double* out);
PCONF_API pconf_status pconf_skew(double r, double b, double* out);
PCONF_API pconf_status pconf_confidence_from_drowsiness(int d1, int d2, int d3, double floor, double* out);

/* ---- k tuning ---------------------------------------------------------- */

typedef struct pconf_tune_config {
  double phi;
  const double* grid; /* NULL: default geometric grid */
  size_t grid_size;
  pconf_adjust_family family;
  double floor;
  pconf_adam_config adam;
  pconf_model_spec model;
  size_t threads;
} pconf_tune_config;

PCONF_API pconf_tune_config pconf_tune_config_default(void);
/* `train` needs confidence; every row of `valid_pos` is taken as positive. */
PCONF_API pconf_status pconf_tune_k(const pconf_dataset* train, const pconf_dataset* valid_pos,
                                    const pconf_tune_config* cfg, pconf_tune_result** out);
PCONF_API void pconf_tune_result_free(pconf_tune_result* result);
PCONF_API double pconf_tune_result_k_star(const pconf_tune_result* result);
PCONF_API size_t pconf_tune_result_count(const pconf_tune_result* result);
/* `failed` is set to 1 for candidates whose training diverged. */
PCONF_API pconf_status pconf_tune_result_entry(const pconf_tune_result* result, size_t index, double* k,
                                               double* fn_rate, double* squared_error, int* failed);
/* A copy of the selected model; free with pconf_model_free. */
PCONF_API pconf_status pconf_tune_result_model(const pconf_tune_result* result, pconf_model** out);
PCONF_API pconf_status pconf_tune_result_to_json(const pconf_tune_result* result, char** out);

/* ---- plotting ---------------------------------------------------------- */

/* Linear models on 2-D data only. */
PCONF_API pconf_status pconf_plot_boundary_svg(const pconf_model* const* models, const char* const* names,
                                               size_t count, const pconf_dataset* labeled, const char* path);

/* ---- synthetic experiments --------------------------------------------- */

/* kind is "overlap" or "phi-error". */
PCONF_API pconf_status pconf_experiment_default_config(const char* kind, int fast, char** out_json);
/* Runs the experiment described by `config_json` (fields absent from it fall
 * back to the full preset of `kind`) and writes its outputs to
 * `output_dir`. */
PCONF_API pconf_status pconf_experiment_run(const char* kind, const char* config_json, const char* output_dir);

#ifdef __cplusplus
}
#endif

#endif /* PCONF_PCONF_H */
