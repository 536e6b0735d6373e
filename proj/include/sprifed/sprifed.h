/*
 * Copyright 2026 The SPriFed Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libsprifed.
 *
 * Every fallible call returns a sprifed_status. On failure a message for the
 * calling thread is available from sprifed_last_error() until the next call
 * on that thread. Handles are opaque and owned by the caller; release them
 * with the matching *_free function. Strings returned through char** are
 * released with sprifed_string_free().
 */

#ifndef SPRIFED_SPRIFED_H_
#define SPRIFED_SPRIFED_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SPRIFED_BUILDING_LIBRARY)
#define SPRIFED_API __attribute__((visibility("default")))
#else
#define SPRIFED_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sprifed_status {
  SPRIFED_OK = 0,
  SPRIFED_ERR_PARAMETER = 1,
  SPRIFED_ERR_DEGENERATE_INPUT = 2,
  SPRIFED_ERR_PARSE = 3,
  SPRIFED_ERR_SOLVER = 4,
  SPRIFED_ERR_UNSUPPORTED_METRIC = 5,
  SPRIFED_ERR_IO = 6,
  SPRIFED_ERR_INTERNAL = 7,
  SPRIFED_ERR_USAGE = 8
} sprifed_status;

typedef struct sprifed_dataset sprifed_dataset;
typedef struct sprifed_model sprifed_model;

SPRIFED_API const char* sprifed_version(void);
SPRIFED_API const char* sprifed_last_error(void);
SPRIFED_API void sprifed_string_free(char* s);

/* ---- Datasets ---------------------------------------------------------- */

typedef struct sprifed_synthetic_params {
  int64_t n;
  int64_t p;
  int64_t s;
  double sigma_eps;
  double coef_mean;
  double coef_std;
  uint64_t seed;
  double x_clip; /* INFINITY: rescale only */
  double y_clip;
} sprifed_synthetic_params;

/* sigma_eps 0.001, coefficients N(2, 1), clips 1, everything else 0. */
SPRIFED_API void sprifed_synthetic_params_init(sprifed_synthetic_params* params);

SPRIFED_API sprifed_status sprifed_dataset_generate(
    const sprifed_synthetic_params* params, sprifed_dataset** out);

/* Fresh rows from the same ground truth and preprocessing as `train`. */
SPRIFED_API sprifed_status sprifed_dataset_generate_test(
    const sprifed_dataset* train, int64_t n_test, uint64_t seed,
    sprifed_dataset** out);

/* Columns x_0..x_{p-1} and y, in any order. `preprocess` != 0 clip-rescales. */
SPRIFED_API sprifed_status sprifed_dataset_load_csv(const char* path,
                                                    double x_clip, double y_clip,
                                                    int preprocess,
                                                    sprifed_dataset** out);

SPRIFED_API sprifed_status sprifed_dataset_write_csv(const sprifed_dataset* dataset,
                                                     const char* path);

SPRIFED_API int64_t sprifed_dataset_n(const sprifed_dataset* dataset);
SPRIFED_API int64_t sprifed_dataset_p(const sprifed_dataset* dataset);

/* Ground-truth support, ascending. Writes the first min(size, capacity) entries and
 * sets *count to the full size. */
SPRIFED_API sprifed_status sprifed_dataset_support(const sprifed_dataset* dataset,
                                                   int64_t* out, int64_t capacity,
                                                   int64_t* count);

SPRIFED_API void sprifed_dataset_free(sprifed_dataset* dataset);

/* ---- Privacy accounting ------------------------------------------------ */

SPRIFED_API sprifed_status sprifed_gdp_compose(const double* mus, size_t count,
                                               double* mu_out);
SPRIFED_API sprifed_status sprifed_gdp_to_dp(double mu, double epsilon,
                                             double* delta_out);
SPRIFED_API sprifed_status sprifed_mu_for_budget(double epsilon, double delta,
                                                 double* mu_out);

/* ---- Algorithms -------------------------------------------------------- */

typedef struct sprifed_run_options {
  const char* algo; /* omp, sprifed_omp, sprifed_omp_no_enhancement,
                       sprifed_omp_grad, dp_sgd_l1, dp_gcd */
  int64_t s;
  double mu_p;       /* INFINITY: noise off */
  double mu_s;
  double clip_bound; /* per-client clip of sprifed_omp_grad */
  int mask_fidelity;
  uint64_t seed;
  /* Baselines; 0 selects the harness default. */
  double learning_rate;
  double l1_coef;
  double mu_step;
  double baseline_clip;
  int64_t total_steps;
} sprifed_run_options;

/* mu_p 0.543, mu_s 0.02, clip_bound 1, algo "sprifed_omp". */
SPRIFED_API void sprifed_run_options_init(sprifed_run_options* options);

SPRIFED_API sprifed_status sprifed_run(const sprifed_dataset* dataset,
                                       const sprifed_run_options* options,
                                       sprifed_model** out);

/* Support in selection order; same contract as sprifed_dataset_support. */
SPRIFED_API sprifed_status sprifed_model_support(const sprifed_model* model,
                                                 int64_t* out, int64_t capacity,
                                                 int64_t* count);
SPRIFED_API sprifed_status sprifed_model_coefficients(const sprifed_model* model,
                                                      double* out, int64_t capacity,
                                                      int64_t* count);
SPRIFED_API sprifed_status sprifed_model_ledger_mu(const sprifed_model* model,
                                                   double* mu_out);
SPRIFED_API sprifed_status sprifed_model_to_json(const sprifed_model* model,
                                                 double epsilon, char** json_out);

SPRIFED_API sprifed_status sprifed_model_test_mse(const sprifed_model* model,
                                                  const sprifed_dataset* test_set,
                                                  double* out);
SPRIFED_API sprifed_status sprifed_model_estimation_error(
    const sprifed_model* model, const sprifed_dataset* dataset, double* out);
SPRIFED_API sprifed_status sprifed_model_empirical_risk(
    const sprifed_model* model, const sprifed_dataset* dataset, double* out);

SPRIFED_API void sprifed_model_free(sprifed_model* model);

/* ---- Experiments ------------------------------------------------------- */

/* Runs a TOML experiment. SPRIFED_SEED in the environment overrides
 * master_seed; a non-null `output` overrides the config's output path. */
SPRIFED_API sprifed_status sprifed_experiment_run(const char* config_path, int jobs,
                                                  const char* output);

SPRIFED_API sprifed_status sprifed_experiment_sweep(const char* config_path,
                                                    const char* axis,
                                                    const double* values,
                                                    size_t count, int jobs,
                                                    const char* output);

/* Summarizes a JSON-lines result file. Writes the CSV to `csv_path` when it
 * is non-null and returns the human-readable table in *table_out. */
SPRIFED_API sprifed_status sprifed_experiment_report(const char* results_path,
                                                     const char* csv_path,
                                                     char** table_out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* SPRIFED_SPRIFED_H_ */
