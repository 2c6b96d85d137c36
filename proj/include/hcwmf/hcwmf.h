/*
 * Copyright 2026 The hcwmf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the hcwmf library: consistency-regularized weighted matrix
 * factorization for hashtag adoption, its baselines, the evaluation sweep,
 * and the consistency t-test.
 *
 * Every object is an opaque handle created by a constructor function and
 * released with the matching *_free. Fallible calls return hcwmf_status; on
 * failure hcwmf_last_error() describes the problem. The message is
 * thread-local and valid until the next failing call on the same thread.
 */

#ifndef HCWMF_H_
#define HCWMF_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(HCWMF_BUILDING)
#define HCWMF_API __declspec(dllexport)
#else
#define HCWMF_API __declspec(dllimport)
#endif
#else
#define HCWMF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hcwmf_status {
  HCWMF_OK = 0,
  HCWMF_ERR_INVALID_ARGUMENT = 1,
  HCWMF_ERR_DIMENSION = 2,
  HCWMF_ERR_IO = 3,
  HCWMF_ERR_PARSE = 4,
  HCWMF_ERR_DIVERGED = 5,
  HCWMF_ERR_INTERNAL = 99
} hcwmf_status;

HCWMF_API const char* hcwmf_version(void);
HCWMF_API const char* hcwmf_status_name(hcwmf_status status);
HCWMF_API const char* hcwmf_last_error(void);

/* Every *_save* function treats the path "-" as stdout. */

typedef struct hcwmf_records hcwmf_records;
typedef struct hcwmf_matrix hcwmf_matrix;
typedef struct hcwmf_model hcwmf_model;
typedef struct hcwmf_results hcwmf_results;

/* ---- adoption records ------------------------------------------------- */

typedef struct hcwmf_synth_config {
  uint64_t n_users;
  uint64_t n_bins;
  double trend_decay;
  double repeat_prob;
  double repeat_decay;
  uint64_t burst_period;
  double participation;
  int64_t start_ts;
  int64_t bin_seconds;
  uint64_t seed;
  const char* hashtag; /* copied; NULL keeps the default */
} hcwmf_synth_config;

HCWMF_API void hcwmf_synth_config_init(hcwmf_synth_config* cfg);

HCWMF_API hcwmf_status hcwmf_records_generate(const hcwmf_synth_config* cfg,
                                              hcwmf_records** out);

/* Several hashtags over one user population. Each user draws a consistency
 * propensity from U(propensity_lo, propensity_hi) once; it scales that
 * user's re-adoption probability for every hashtag. */
HCWMF_API hcwmf_status hcwmf_records_generate_corpus(
    const hcwmf_synth_config* base, const char* const* hashtags,
    size_t n_hashtags, double propensity_lo, double propensity_hi,
    hcwmf_records** out);

/* Newline-delimited JSON. Malformed lines are skipped and counted in
 * *skipped (may be NULL). */
HCWMF_API hcwmf_status hcwmf_records_load(const char* path, hcwmf_records** out,
                                          size_t* skipped);
HCWMF_API hcwmf_status hcwmf_records_save(const hcwmf_records* records,
                                          const char* path);
HCWMF_API size_t hcwmf_records_count(const hcwmf_records* records);

/* Line number (1-based) and reason of the i-th skipped line of the last
 * load. */
HCWMF_API size_t hcwmf_records_warning_count(const hcwmf_records* records);
HCWMF_API hcwmf_status hcwmf_records_warning(const hcwmf_records* records,
                                             size_t index, size_t* line,
                                             const char** reason);

/* CSV "bin,tweets,users" of running totals. */
HCWMF_API hcwmf_status hcwmf_records_save_cumulative(const hcwmf_records* records,
                                                     int64_t bin_seconds,
                                                     const char* path);
HCWMF_API void hcwmf_records_free(hcwmf_records* records);

/* ---- user-time matrices ----------------------------------------------- */

/* cols = 0 picks the occupied bins plus 25% headroom. */
HCWMF_API hcwmf_status hcwmf_matrix_from_records(const hcwmf_records* records,
                                                 const char* hashtag,
                                                 int64_t bin_seconds,
                                                 size_t cols,
                                                 hcwmf_matrix** out);
HCWMF_API hcwmf_status hcwmf_matrix_create(size_t rows, size_t cols,
                                           const size_t* row_idx,
                                           const size_t* col_idx, size_t nnz,
                                           hcwmf_matrix** out);
HCWMF_API hcwmf_status hcwmf_matrix_load(const char* path, hcwmf_matrix** out);
HCWMF_API hcwmf_status hcwmf_matrix_save(const hcwmf_matrix* matrix,
                                         const char* path);
HCWMF_API size_t hcwmf_matrix_rows(const hcwmf_matrix* matrix);
HCWMF_API size_t hcwmf_matrix_cols(const hcwmf_matrix* matrix);
HCWMF_API size_t hcwmf_matrix_nnz(const hcwmf_matrix* matrix);
HCWMF_API int hcwmf_matrix_get(const hcwmf_matrix* matrix, size_t row, size_t col);
HCWMF_API void hcwmf_matrix_free(hcwmf_matrix* matrix);

/* ---- training --------------------------------------------------------- */

typedef struct hcwmf_train_config {
  uint64_t d;
  double gamma1;
  double gamma2;
  double mu;
  double lambda;
  uint64_t max_iters;
  double rel_tol;
  uint64_t seed;
} hcwmf_train_config;

HCWMF_API void hcwmf_train_config_init(hcwmf_train_config* cfg);

/* Fits the whole matrix: W is all ones and G is built from the matrix. */
HCWMF_API hcwmf_status hcwmf_train(const hcwmf_matrix* matrix,
                                   const hcwmf_train_config* cfg,
                                   hcwmf_model** out);
HCWMF_API size_t hcwmf_model_iterations(const hcwmf_model* model);
HCWMF_API int hcwmf_model_converged(const hcwmf_model* model);
HCWMF_API hcwmf_status hcwmf_model_objective(const hcwmf_model* model,
                                             size_t iteration, double* out);
HCWMF_API hcwmf_status hcwmf_model_predict(const hcwmf_model* model, size_t row,
                                           size_t col, double* out);
HCWMF_API hcwmf_status hcwmf_model_save_factors(const hcwmf_model* model,
                                                const char* path);
HCWMF_API hcwmf_status hcwmf_model_save_trace(const hcwmf_model* model,
                                              const char* path);
HCWMF_API void hcwmf_model_free(hcwmf_model* model);

/* ---- evaluation sweep ------------------------------------------------- */

typedef enum hcwmf_method {
  HCWMF_METHOD_HCWMF = 1 << 0,
  HCWMF_METHOD_WMF = 1 << 1,
  HCWMF_METHOD_AR = 1 << 2,
  HCWMF_METHOD_MC = 1 << 3,
  HCWMF_METHOD_RANDOM = 1 << 4
} hcwmf_method;

/* Case-insensitive; accepts hCWMF, WMF, AR (or ARMA), MC (or Markov),
 * Random. Returns 0 for an unknown name. */
HCWMF_API unsigned hcwmf_method_from_name(const char* name);

typedef struct hcwmf_sweep_spec {
  const char* dataset;     /* label written to every row */
  unsigned methods;        /* OR of hcwmf_method, run in enum order */
  const double* fractions; /* percent held out, each in (0, 100) */
  size_t n_fractions;
  const uint64_t* dims;    /* latent dimensions; NULL/0 uses base.d */
  size_t n_dims;
  hcwmf_train_config base;
  uint64_t seed;
  int clamp;               /* nonzero clamps factorization output to [0,1] */
  size_t threads;          /* 0 = hardware concurrency */
} hcwmf_sweep_spec;

HCWMF_API void hcwmf_sweep_spec_init(hcwmf_sweep_spec* spec);

HCWMF_API hcwmf_status hcwmf_eval(const hcwmf_matrix* matrix,
                                  const hcwmf_sweep_spec* spec,
                                  hcwmf_results** out);

typedef struct hcwmf_result_row {
  const char* dataset;
  const char* method;
  double fraction;
  uint64_t d;
  double rmse;       /* NaN when error != NULL */
  const char* error; /* NULL on success */
} hcwmf_result_row;

HCWMF_API size_t hcwmf_results_count(const hcwmf_results* results);
HCWMF_API hcwmf_status hcwmf_results_row(const hcwmf_results* results,
                                         size_t index, hcwmf_result_row* out);
HCWMF_API hcwmf_status hcwmf_results_save(const hcwmf_results* results,
                                          const char* path);
HCWMF_API void hcwmf_results_free(hcwmf_results* results);

/* ---- consistency t-test ----------------------------------------------- */

typedef struct hcwmf_ttest_result {
  double t;
  double df;
  double p;
  double alpha;
  int reject;
  size_t n;          /* users in each vector */
  double mean_hc_u;
  double mean_hc_r;
} hcwmf_ttest_result;

/* One-sided Welch test of H1: mean(hc_u) > mean(hc_r). */
HCWMF_API hcwmf_status hcwmf_ttest(const hcwmf_records* records, double alpha,
                                   uint64_t seed, hcwmf_ttest_result* out);

/* Upper tail P(T > t) of Student's t. */
HCWMF_API hcwmf_status hcwmf_student_t_upper_tail(double t, double df,
                                                  double* out);

#ifdef __cplusplus
}
#endif

#endif /* HCWMF_H_ */
