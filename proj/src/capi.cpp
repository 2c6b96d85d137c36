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

#include "hcwmf/hcwmf.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <string_view>

#include "hcwmf/dataio.hpp"
#include "hcwmf/error.hpp"
#include "hcwmf/factorization.hpp"
#include "hcwmf/harness.hpp"
#include "hcwmf/stats.hpp"

struct hcwmf_records {
  hcwmf::dataio::AdoptionRecords records;
  std::vector<hcwmf::dataio::ParseWarning> warnings;
};

struct hcwmf_matrix {
  hcwmf::linalg::SparseBinaryMatrix x;
};

struct hcwmf_model {
  hcwmf::factorization::TrainResult fit;
};

struct hcwmf_results {
  hcwmf::harness::ResultsTable table;
};

namespace {

using hcwmf::ErrorCode;

thread_local std::string g_last_error;

hcwmf_status set_error(hcwmf_status status, const char* what) {
  g_last_error = what;
  return status;
}

hcwmf_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return HCWMF_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDimensionMismatch: return HCWMF_ERR_DIMENSION;
    case ErrorCode::kIo: return HCWMF_ERR_IO;
    case ErrorCode::kParse: return HCWMF_ERR_PARSE;
    case ErrorCode::kDiverged: return HCWMF_ERR_DIVERGED;
  }
  return HCWMF_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes. Nothing may
// propagate across the C boundary.
template <typename F>
hcwmf_status guarded(F&& body) noexcept {
  try {
    body();
    return HCWMF_OK;
  } catch (const hcwmf::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HCWMF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HCWMF_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(HCWMF_ERR_INTERNAL, "unknown error");
  }
}

#define HCWMF_REQUIRE_ARG(ptr)                                                 \
  do {                                                                         \
    if ((ptr) == nullptr)                                                      \
      return set_error(HCWMF_ERR_INVALID_ARGUMENT, #ptr " must not be NULL");  \
  } while (0)

hcwmf::dataio::SynthConfig to_cpp(const hcwmf_synth_config& c) {
  hcwmf::dataio::SynthConfig s;
  s.n_users = c.n_users;
  s.n_bins = c.n_bins;
  s.trend_decay = c.trend_decay;
  s.repeat_prob = c.repeat_prob;
  s.repeat_decay = c.repeat_decay;
  s.burst_period = c.burst_period;
  s.participation = c.participation;
  s.start_ts = c.start_ts;
  s.bin_seconds = c.bin_seconds;
  s.seed = c.seed;
  if (c.hashtag != nullptr) s.hashtag = c.hashtag;
  return s;
}

hcwmf::factorization::TrainConfig to_cpp(const hcwmf_train_config& c) {
  hcwmf::factorization::TrainConfig t;
  t.d = c.d;
  t.gamma1 = c.gamma1;
  t.gamma2 = c.gamma2;
  t.mu = c.mu;
  t.lambda = c.lambda;
  t.max_iters = c.max_iters;
  t.rel_tol = c.rel_tol;
  t.seed = c.seed;
  return t;
}

// Writes through `emit` to `path`, or to stdout when `path` is "-".
template <typename F>
void write_to(const char* path, F&& emit) {
  if (std::string_view(path) == "-") {
    emit(std::cout);
    std::cout.flush();
    if (!std::cout) hcwmf::fail(ErrorCode::kIo, "write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) hcwmf::fail(ErrorCode::kIo, std::string("cannot open '") + path + "' for writing");
  emit(out);
  out.flush();
  if (!out) hcwmf::fail(ErrorCode::kIo, std::string("write to '") + path + "' failed");
}

}  // namespace

extern "C" {

const char* hcwmf_version(void) { return "1.0.0"; }

const char* hcwmf_status_name(hcwmf_status status) {
  switch (status) {
    case HCWMF_OK: return "ok";
    case HCWMF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HCWMF_ERR_DIMENSION: return "dimension mismatch";
    case HCWMF_ERR_IO: return "i/o error";
    case HCWMF_ERR_PARSE: return "parse error";
    case HCWMF_ERR_DIVERGED: return "diverged";
    case HCWMF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* hcwmf_last_error(void) { return g_last_error.c_str(); }

void hcwmf_synth_config_init(hcwmf_synth_config* cfg) {
  if (cfg == nullptr) return;
  const hcwmf::dataio::SynthConfig d;
  cfg->n_users = d.n_users;
  cfg->n_bins = d.n_bins;
  cfg->trend_decay = d.trend_decay;
  cfg->repeat_prob = d.repeat_prob;
  cfg->repeat_decay = d.repeat_decay;
  cfg->burst_period = d.burst_period;
  cfg->participation = d.participation;
  cfg->start_ts = d.start_ts;
  cfg->bin_seconds = d.bin_seconds;
  cfg->seed = d.seed;
  cfg->hashtag = nullptr;
}

hcwmf_status hcwmf_records_generate(const hcwmf_synth_config* cfg,
                                    hcwmf_records** out) {
  HCWMF_REQUIRE_ARG(cfg);
  HCWMF_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<hcwmf_records>();
    r->records = hcwmf::dataio::generate_synthetic(to_cpp(*cfg));
    *out = r.release();
  });
}

hcwmf_status hcwmf_records_generate_corpus(const hcwmf_synth_config* base,
                                           const char* const* hashtags,
                                           size_t n_hashtags, double propensity_lo,
                                           double propensity_hi,
                                           hcwmf_records** out) {
  HCWMF_REQUIRE_ARG(base);
  HCWMF_REQUIRE_ARG(hashtags);
  HCWMF_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    hcwmf::dataio::CorpusConfig cfg;
    cfg.base = to_cpp(*base);
    for (size_t i = 0; i < n_hashtags; ++i) {
      hcwmf::require(hashtags[i] != nullptr, "hashtag names must not be NULL");
      cfg.hashtags.emplace_back(hashtags[i]);
    }
    cfg.propensity_lo = propensity_lo;
    cfg.propensity_hi = propensity_hi;
    auto r = std::make_unique<hcwmf_records>();
    r->records = hcwmf::dataio::generate_corpus(cfg);
    *out = r.release();
  });
}

hcwmf_status hcwmf_records_load(const char* path, hcwmf_records** out,
                                size_t* skipped) {
  HCWMF_REQUIRE_ARG(path);
  HCWMF_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    auto parsed = hcwmf::dataio::read_records_file(path);
    auto r = std::make_unique<hcwmf_records>();
    r->records = std::move(parsed.records);
    r->warnings = std::move(parsed.warnings);
    if (skipped != nullptr) *skipped = parsed.skipped;
    *out = r.release();
  });
}

hcwmf_status hcwmf_records_save(const hcwmf_records* records, const char* path) {
  HCWMF_REQUIRE_ARG(records);
  HCWMF_REQUIRE_ARG(path);
  return guarded([&] {
    write_to(path, [&](std::ostream& os) { hcwmf::dataio::write_records(os, records->records); });
  });
}

size_t hcwmf_records_count(const hcwmf_records* records) {
  return records == nullptr ? 0 : records->records.events.size();
}

size_t hcwmf_records_warning_count(const hcwmf_records* records) {
  return records == nullptr ? 0 : records->warnings.size();
}

hcwmf_status hcwmf_records_warning(const hcwmf_records* records, size_t index,
                                   size_t* line, const char** reason) {
  HCWMF_REQUIRE_ARG(records);
  if (index >= records->warnings.size())
    return set_error(HCWMF_ERR_INVALID_ARGUMENT, "warning index out of range");
  if (line != nullptr) *line = records->warnings[index].line;
  if (reason != nullptr) *reason = records->warnings[index].reason.c_str();
  return HCWMF_OK;
}

hcwmf_status hcwmf_records_save_cumulative(const hcwmf_records* records,
                                           int64_t bin_seconds, const char* path) {
  HCWMF_REQUIRE_ARG(records);
  HCWMF_REQUIRE_ARG(path);
  return guarded([&] {
    const auto points = hcwmf::dataio::cumulative_counts(records->records, bin_seconds);
    write_to(path, [&](std::ostream& os) { hcwmf::dataio::write_cumulative_csv(os, points); });
  });
}

void hcwmf_records_free(hcwmf_records* records) { delete records; }

hcwmf_status hcwmf_matrix_from_records(const hcwmf_records* records,
                                       const char* hashtag, int64_t bin_seconds,
                                       size_t cols, hcwmf_matrix** out) {
  HCWMF_REQUIRE_ARG(records);
  HCWMF_REQUIRE_ARG(hashtag);
  HCWMF_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    auto binned = hcwmf::dataio::bin_records(records->records, hashtag, bin_seconds, cols);
    *out = new hcwmf_matrix{std::move(binned.x)};
  });
}

hcwmf_status hcwmf_matrix_create(size_t rows, size_t cols, const size_t* row_idx,
                                 const size_t* col_idx, size_t nnz,
                                 hcwmf_matrix** out) {
  HCWMF_REQUIRE_ARG(out);
  *out = nullptr;
  if (nnz > 0) {
    HCWMF_REQUIRE_ARG(row_idx);
    HCWMF_REQUIRE_ARG(col_idx);
  }
  return guarded([&] {
    std::vector<hcwmf::linalg::Cell> cells(nnz);
    for (size_t k = 0; k < nnz; ++k) cells[k] = {row_idx[k], col_idx[k]};
    *out = new hcwmf_matrix{hcwmf::linalg::SparseBinaryMatrix(rows, cols, std::move(cells))};
  });
}

hcwmf_status hcwmf_matrix_load(const char* path, hcwmf_matrix** out) {
  HCWMF_REQUIRE_ARG(path);
  HCWMF_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] { *out = new hcwmf_matrix{hcwmf::dataio::read_matrix_file(path)}; });
}

hcwmf_status hcwmf_matrix_save(const hcwmf_matrix* matrix, const char* path) {
  HCWMF_REQUIRE_ARG(matrix);
  HCWMF_REQUIRE_ARG(path);
  return guarded([&] {
    write_to(path, [&](std::ostream& os) { hcwmf::dataio::write_matrix_csv(os, matrix->x); });
  });
}

size_t hcwmf_matrix_rows(const hcwmf_matrix* m) { return m == nullptr ? 0 : m->x.rows(); }
size_t hcwmf_matrix_cols(const hcwmf_matrix* m) { return m == nullptr ? 0 : m->x.cols(); }
size_t hcwmf_matrix_nnz(const hcwmf_matrix* m) { return m == nullptr ? 0 : m->x.nnz(); }

int hcwmf_matrix_get(const hcwmf_matrix* m, size_t row, size_t col) {
  return m != nullptr && m->x.contains(row, col) ? 1 : 0;
}

void hcwmf_matrix_free(hcwmf_matrix* matrix) { delete matrix; }

void hcwmf_train_config_init(hcwmf_train_config* cfg) {
  if (cfg == nullptr) return;
  const hcwmf::factorization::TrainConfig d;
  cfg->d = d.d;
  cfg->gamma1 = d.gamma1;
  cfg->gamma2 = d.gamma2;
  cfg->mu = d.mu;
  cfg->lambda = d.lambda;
  cfg->max_iters = d.max_iters;
  cfg->rel_tol = d.rel_tol;
  cfg->seed = d.seed;
}

hcwmf_status hcwmf_train(const hcwmf_matrix* matrix, const hcwmf_train_config* cfg,
                         hcwmf_model** out) {
  HCWMF_REQUIRE_ARG(matrix);
  HCWMF_REQUIRE_ARG(cfg);
  HCWMF_REQUIRE_ARG(out);
  *out = nullptr;
  return guarded([&] {
    const auto masks = hcwmf::masks::build_masks(matrix->x, {});
    auto fit = hcwmf::factorization::train(matrix->x, masks, to_cpp(*cfg));
    *out = new hcwmf_model{std::move(fit)};
  });
}

size_t hcwmf_model_iterations(const hcwmf_model* model) {
  return model == nullptr ? 0 : model->fit.trace.iterations_run;
}

int hcwmf_model_converged(const hcwmf_model* model) {
  return model != nullptr && model->fit.trace.converged ? 1 : 0;
}

hcwmf_status hcwmf_model_objective(const hcwmf_model* model, size_t iteration,
                                   double* out) {
  HCWMF_REQUIRE_ARG(model);
  HCWMF_REQUIRE_ARG(out);
  const auto& obj = model->fit.trace.objective_per_iter;
  if (iteration == 0 || iteration > obj.size())
    return set_error(HCWMF_ERR_INVALID_ARGUMENT, "iteration out of range (1-based)");
  *out = obj[iteration - 1];
  return HCWMF_OK;
}

hcwmf_status hcwmf_model_predict(const hcwmf_model* model, size_t row, size_t col,
                                 double* out) {
  HCWMF_REQUIRE_ARG(model);
  HCWMF_REQUIRE_ARG(out);
  const auto& u = model->fit.factors.u;
  const auto& v = model->fit.factors.v;
  if (row >= u.rows() || col >= v.rows())
    return set_error(HCWMF_ERR_INVALID_ARGUMENT, "cell outside the fitted matrix");
  double p = 0.0;
  for (size_t k = 0; k < u.cols(); ++k) p += u(row, k) * v(col, k);
  *out = p;
  return HCWMF_OK;
}

hcwmf_status hcwmf_model_save_factors(const hcwmf_model* model, const char* path) {
  HCWMF_REQUIRE_ARG(model);
  HCWMF_REQUIRE_ARG(path);
  return guarded([&] {
    write_to(path, [&](std::ostream& os) { hcwmf::factorization::write_factors_csv(os, model->fit.factors); });
  });
}

hcwmf_status hcwmf_model_save_trace(const hcwmf_model* model, const char* path) {
  HCWMF_REQUIRE_ARG(model);
  HCWMF_REQUIRE_ARG(path);
  return guarded([&] {
    write_to(path, [&](std::ostream& os) { hcwmf::factorization::write_trace_csv(os, model->fit.trace); });
  });
}

void hcwmf_model_free(hcwmf_model* model) { delete model; }

unsigned hcwmf_method_from_name(const char* name) {
  if (name == nullptr) return 0;
  auto m = hcwmf::harness::parse_method(name);
  if (!m) return 0;
  switch (*m) {
    case hcwmf::harness::Method::kHcwmf: return HCWMF_METHOD_HCWMF;
    case hcwmf::harness::Method::kWmf: return HCWMF_METHOD_WMF;
    case hcwmf::harness::Method::kAr: return HCWMF_METHOD_AR;
    case hcwmf::harness::Method::kMarkov: return HCWMF_METHOD_MC;
    case hcwmf::harness::Method::kRandom: return HCWMF_METHOD_RANDOM;
  }
  return 0;
}

void hcwmf_sweep_spec_init(hcwmf_sweep_spec* spec) {
  if (spec == nullptr) return;
  spec->dataset = "synthetic";
  spec->methods = HCWMF_METHOD_HCWMF | HCWMF_METHOD_WMF | HCWMF_METHOD_AR |
                  HCWMF_METHOD_MC | HCWMF_METHOD_RANDOM;
  spec->fractions = nullptr;
  spec->n_fractions = 0;
  spec->dims = nullptr;
  spec->n_dims = 0;
  hcwmf_train_config_init(&spec->base);
  spec->seed = 1;
  spec->clamp = 0;
  spec->threads = 0;
}

hcwmf_status hcwmf_eval(const hcwmf_matrix* matrix, const hcwmf_sweep_spec* spec,
                        hcwmf_results** out) {
  HCWMF_REQUIRE_ARG(matrix);
  HCWMF_REQUIRE_ARG(spec);
  HCWMF_REQUIRE_ARG(out);
  *out = nullptr;
  if (spec->n_fractions > 0) HCWMF_REQUIRE_ARG(spec->fractions);
  if (spec->n_dims > 0) HCWMF_REQUIRE_ARG(spec->dims);
  return guarded([&] {
    using hcwmf::harness::Method;
    hcwmf::harness::SweepSpec s;
    s.dataset = spec->dataset != nullptr ? spec->dataset : "synthetic";
    const std::pair<unsigned, Method> order[] = {
        {HCWMF_METHOD_HCWMF, Method::kHcwmf}, {HCWMF_METHOD_WMF, Method::kWmf},
        {HCWMF_METHOD_AR, Method::kAr},       {HCWMF_METHOD_MC, Method::kMarkov},
        {HCWMF_METHOD_RANDOM, Method::kRandom}};
    for (const auto& [bit, m] : order)
      if (spec->methods & bit) s.methods.push_back(m);
    s.fractions.assign(spec->fractions, spec->fractions + spec->n_fractions);
    for (size_t i = 0; i < spec->n_dims; ++i) s.dims.push_back(spec->dims[i]);
    s.base = to_cpp(spec->base);
    s.seed = spec->seed;
    s.clamp = spec->clamp != 0;
    s.threads = spec->threads;
    *out = new hcwmf_results{hcwmf::harness::run_sweep(matrix->x, s)};
  });
}

size_t hcwmf_results_count(const hcwmf_results* results) {
  return results == nullptr ? 0 : results->table.rows.size();
}

hcwmf_status hcwmf_results_row(const hcwmf_results* results, size_t index,
                               hcwmf_result_row* out) {
  HCWMF_REQUIRE_ARG(results);
  HCWMF_REQUIRE_ARG(out);
  if (index >= results->table.rows.size())
    return set_error(HCWMF_ERR_INVALID_ARGUMENT, "row index out of range");
  const auto& r = results->table.rows[index];
  out->dataset = r.dataset.c_str();
  out->method = r.method.c_str();
  out->fraction = r.fraction;
  out->d = r.d;
  out->rmse = r.rmse;
  out->error = r.ok() ? nullptr : r.error.c_str();
  return HCWMF_OK;
}

hcwmf_status hcwmf_results_save(const hcwmf_results* results, const char* path) {
  HCWMF_REQUIRE_ARG(results);
  HCWMF_REQUIRE_ARG(path);
  return guarded([&] {
    write_to(path, [&](std::ostream& os) { hcwmf::harness::write_results_csv(os, results->table); });
  });
}

void hcwmf_results_free(hcwmf_results* results) { delete results; }

hcwmf_status hcwmf_ttest(const hcwmf_records* records, double alpha, uint64_t seed,
                         hcwmf_ttest_result* out) {
  HCWMF_REQUIRE_ARG(records);
  HCWMF_REQUIRE_ARG(out);
  return guarded([&] {
    const auto v = hcwmf::stats::build_consistency_vectors(records->records, seed);
    const auto r = hcwmf::stats::welch_ttest_one_sided(v.hc_u, v.hc_r, alpha);
    auto mean = [](const std::vector<double>& x) {
      double s = 0.0;
      for (double e : x) s += e;
      return s / static_cast<double>(x.size());
    };
    out->t = r.t_stat;
    out->df = r.degrees_freedom;
    out->p = r.p_value;
    out->alpha = r.alpha;
    out->reject = r.reject() ? 1 : 0;
    out->n = v.hc_u.size();
    out->mean_hc_u = mean(v.hc_u);
    out->mean_hc_r = mean(v.hc_r);
  });
}

hcwmf_status hcwmf_student_t_upper_tail(double t, double df, double* out) {
  HCWMF_REQUIRE_ARG(out);
  return guarded([&] { *out = hcwmf::stats::student_t_upper_tail(t, df); });
}

}  // extern "C"
