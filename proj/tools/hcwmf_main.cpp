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

// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcwmf/hcwmf.h"

namespace {

struct Failure {
  hcwmf_status status;
};

void check(hcwmf_status s) {
  if (s != HCWMF_OK) throw Failure{s};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Records = std::unique_ptr<hcwmf_records, Deleter<hcwmf_records, hcwmf_records_free>>;
using Matrix = std::unique_ptr<hcwmf_matrix, Deleter<hcwmf_matrix, hcwmf_matrix_free>>;
using Model = std::unique_ptr<hcwmf_model, Deleter<hcwmf_model, hcwmf_model_free>>;
using Results = std::unique_ptr<hcwmf_results, Deleter<hcwmf_results, hcwmf_results_free>>;

Records load_records(const std::string& path) {
  hcwmf_records* raw = nullptr;
  size_t skipped = 0;
  check(hcwmf_records_load(path.c_str(), &raw, &skipped));
  Records r(raw);
  for (size_t i = 0; i < hcwmf_records_warning_count(raw); ++i) {
    size_t line = 0;
    const char* reason = nullptr;
    check(hcwmf_records_warning(raw, i, &line, &reason));
    std::cerr << "hcwmf: " << path << ":" << line << ": skipped: " << reason << "\n";
  }
  if (skipped > 0) std::cerr << "hcwmf: " << skipped << " malformed line(s) skipped\n";
  return r;
}

Matrix load_matrix(const std::string& path) {
  hcwmf_matrix* raw = nullptr;
  check(hcwmf_matrix_load(path.c_str(), &raw));
  return Matrix(raw);
}

struct SynthArgs {
  std::string out;
  std::string hashtag = "#synthetic";
  std::vector<std::string> hashtags;
  double propensity_lo = 0.0;
  double propensity_hi = 1.0;
  hcwmf_synth_config cfg{};
};

void run_synth(SynthArgs& a) {
  a.cfg.hashtag = a.hashtag.c_str();
  hcwmf_records* raw = nullptr;
  if (a.hashtags.empty()) {
    check(hcwmf_records_generate(&a.cfg, &raw));
  } else {
    std::vector<const char*> names;
    for (const auto& h : a.hashtags) names.push_back(h.c_str());
    check(hcwmf_records_generate_corpus(&a.cfg, names.data(), names.size(),
                                        a.propensity_lo, a.propensity_hi, &raw));
  }
  Records r(raw);
  check(hcwmf_records_save(r.get(), a.out.c_str()));
}

struct IngestArgs {
  std::string in, out, hashtag;
  int64_t bin_seconds = 3600;
  size_t cols = 0;
};

void run_ingest(const IngestArgs& a) {
  auto r = load_records(a.in);
  hcwmf_matrix* raw = nullptr;
  check(hcwmf_matrix_from_records(r.get(), a.hashtag.c_str(), a.bin_seconds, a.cols, &raw));
  Matrix m(raw);
  if (hcwmf_matrix_rows(raw) == 0)
    std::cerr << "hcwmf: warning: no events for hashtag '" << a.hashtag << "'\n";
  check(hcwmf_matrix_save(m.get(), a.out.c_str()));
  std::cerr << "hcwmf: " << hcwmf_matrix_rows(raw) << " users x " << hcwmf_matrix_cols(raw)
            << " bins, " << hcwmf_matrix_nnz(raw) << " adoptions\n";
}

struct TrainArgs {
  std::string matrix, out = "-", trace;
  hcwmf_train_config cfg{};
};

void run_train(const TrainArgs& a) {
  auto m = load_matrix(a.matrix);
  hcwmf_model* raw = nullptr;
  check(hcwmf_train(m.get(), &a.cfg, &raw));
  Model model(raw);
  check(hcwmf_model_save_factors(raw, a.out.c_str()));
  if (!a.trace.empty()) check(hcwmf_model_save_trace(raw, a.trace.c_str()));
  double last = 0.0;
  check(hcwmf_model_objective(raw, hcwmf_model_iterations(raw), &last));
  std::cerr << "hcwmf: " << hcwmf_model_iterations(raw) << " iterations, objective " << last
            << (hcwmf_model_converged(raw) ? ", converged" : ", iteration cap reached") << "\n";
}

struct EvalArgs {
  std::string matrix, out = "-", dataset = "synthetic";
  std::vector<std::string> methods = {"hCWMF", "WMF", "AR", "MC", "Random"};
  std::vector<double> fractions = {10, 20, 30, 40, 50};
  std::vector<uint64_t> dims;
  bool clamp = false;
  size_t threads = 0;
  hcwmf_sweep_spec spec{};
};

void run_eval(EvalArgs& a) {
  unsigned mask = 0;
  for (const auto& name : a.methods) {
    const unsigned bit = hcwmf_method_from_name(name.c_str());
    if (bit == 0) throw CLI::ValidationError("--methods", "unknown method '" + name + "'");
    mask |= bit;
  }
  auto m = load_matrix(a.matrix);
  a.spec.dataset = a.dataset.c_str();
  a.spec.methods = mask;
  a.spec.fractions = a.fractions.data();
  a.spec.n_fractions = a.fractions.size();
  a.spec.dims = a.dims.data();
  a.spec.n_dims = a.dims.size();
  a.spec.clamp = a.clamp ? 1 : 0;
  a.spec.threads = a.threads;
  hcwmf_results* raw = nullptr;
  check(hcwmf_eval(m.get(), &a.spec, &raw));
  Results res(raw);
  for (size_t i = 0; i < hcwmf_results_count(raw); ++i) {
    hcwmf_result_row row{};
    check(hcwmf_results_row(raw, i, &row));
    if (row.error != nullptr)
      std::cerr << "hcwmf: " << row.method << " fraction=" << row.fraction << " d=" << row.d
                << " failed: " << row.error << "\n";
  }
  check(hcwmf_results_save(raw, a.out.c_str()));
}

struct TtestArgs {
  std::string records, out;
  double alpha = 0.01;
  uint64_t seed = 1;
};

void run_ttest(const TtestArgs& a) {
  auto r = load_records(a.records);
  hcwmf_ttest_result res{};
  check(hcwmf_ttest(r.get(), a.alpha, a.seed, &res));
  nlohmann::ordered_json j;
  j["t"] = res.t;
  j["df"] = res.df;
  j["p"] = res.p;
  j["alpha"] = res.alpha;
  j["reject"] = res.reject != 0;
  const std::string text = j.dump() + "\n";
  std::cout << text;
  if (!a.out.empty()) {
    std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) {
      std::cerr << "hcwmf: cannot write '" << a.out << "'\n";
      throw Failure{HCWMF_ERR_IO};
    }
  }
  std::cerr << "hcwmf: n=" << res.n << " mean hc_u=" << res.mean_hc_u
            << " mean hc_r=" << res.mean_hc_r << "\n";
}

struct CumulativeArgs {
  std::string records, out = "-";
  int64_t bin_seconds = 3600;
};

void run_cumulative(const CumulativeArgs& a) {
  auto r = load_records(a.records);
  check(hcwmf_records_save_cumulative(r.get(), a.bin_seconds, a.out.c_str()));
}

void add_train_options(CLI::App* cmd, hcwmf_train_config& c, bool with_d) {
  if (with_d) cmd->add_option("--d", c.d, "latent dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma1", c.gamma1, "user factor penalty")->check(CLI::NonNegativeNumber);
  cmd->add_option("--gamma2", c.gamma2, "time factor penalty")->check(CLI::NonNegativeNumber);
  cmd->add_option("--mu", c.mu, "consistency weight (0 gives WMF)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--lambda", c.lambda, "step size")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", c.max_iters, "iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--rel-tol", c.rel_tol, "relative objective change to stop at")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hashtag adoption prediction by weighted matrix factorization"};
  app.set_version_flag("--version", std::string(hcwmf_version()));
  app.require_subcommand(1);

  SynthArgs synth;
  hcwmf_synth_config_init(&synth.cfg);
  auto* s = app.add_subcommand("synth", "generate a synthetic adoption record file");
  s->add_option("--users", synth.cfg.n_users, "number of users")->check(CLI::PositiveNumber);
  s->add_option("--bins", synth.cfg.n_bins, "number of time bins")->check(CLI::PositiveNumber);
  s->add_option("--repeat-prob", synth.cfg.repeat_prob, "base repeat probability")
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--trend-decay", synth.cfg.trend_decay, "onset decay rate per burst");
  s->add_option("--repeat-decay", synth.cfg.repeat_decay, "repeat decay per burst");
  s->add_option("--burst-period", synth.cfg.burst_period, "bins between activity bursts")
      ->check(CLI::PositiveNumber);
  s->add_option("--participation", synth.cfg.participation, "fraction of users who adopt")
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--hashtag", synth.hashtag, "hashtag label");
  s->add_option("--hashtags", synth.hashtags, "several hashtags sharing user propensities")
      ->delimiter(',');
  s->add_option("--propensity-lo", synth.propensity_lo, "lower propensity bound (corpus)");
  s->add_option("--propensity-hi", synth.propensity_hi, "upper propensity bound (corpus)");
  s->add_option("--start-ts", synth.cfg.start_ts, "unix time of bin 0");
  s->add_option("--bin-seconds", synth.cfg.bin_seconds, "seconds per bin")
      ->check(CLI::PositiveNumber);
  s->add_option("--seed", synth.cfg.seed, "random seed");
  s->add_option("--out", synth.out, "output record file (- for stdout)")->required();

  IngestArgs ingest;
  auto* i = app.add_subcommand("ingest", "bin one hashtag into a user x time matrix");
  i->add_option("--in", ingest.in, "record file")->required();
  i->add_option("--hashtag", ingest.hashtag, "hashtag to extract")->required();
  i->add_option("--bin-seconds", ingest.bin_seconds, "seconds per bin")
      ->check(CLI::PositiveNumber);
  i->add_option("--cols", ingest.cols, "matrix width (default: occupied bins + 25%)");
  i->add_option("--out", ingest.out, "output matrix CSV (- for stdout)")->required();

  TrainArgs train;
  hcwmf_train_config_init(&train.cfg);
  auto* t = app.add_subcommand("train", "fit factors on a full matrix");
  t->add_option("--matrix", train.matrix, "matrix CSV")->required();
  add_train_options(t, train.cfg, true);
  t->add_option("--seed", train.cfg.seed, "initialization seed");
  t->add_option("--trace", train.trace, "objective trace CSV");
  t->add_option("--out", train.out, "factor dump CSV (default stdout)");

  EvalArgs eval;
  hcwmf_sweep_spec_init(&eval.spec);
  auto* e = app.add_subcommand("eval", "masked RMSE sweep over methods, fractions and d");
  e->add_option("--matrix", eval.matrix, "matrix CSV")->required();
  e->add_option("--methods", eval.methods, "hCWMF,WMF,AR,MC,Random")->delimiter(',');
  e->add_option("--fractions", eval.fractions, "percent of adoptions held out")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 100.0));
  e->add_option("--dims", eval.dims, "latent dimensions")->delimiter(',');
  add_train_options(e, eval.spec.base, false);
  e->add_option("--seed", eval.spec.seed, "master seed");
  e->add_option("--dataset", eval.dataset, "dataset label");
  e->add_flag("--clamp", eval.clamp, "clamp factorization predictions to [0,1]");
  e->add_option("--threads", eval.threads, "worker threads (0 = all cores)");
  e->add_option("--out", eval.out, "results CSV (default stdout)");

  TtestArgs ttest;
  auto* tt = app.add_subcommand("ttest", "one-sided consistency test over users");
  tt->add_option("--records", ttest.records, "record file")->required();
  tt->add_option("--alpha", ttest.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  tt->add_option("--seed", ttest.seed, "partner sampling seed");
  tt->add_option("--out", ttest.out, "also write the JSON here");

  CumulativeArgs cum;
  auto* c = app.add_subcommand("cumulative", "running tweet and user counts per bin");
  c->add_option("--records", cum.records, "record file")->required();
  c->add_option("--bin-seconds", cum.bin_seconds, "seconds per bin")->check(CLI::PositiveNumber);
  c->add_option("--out", cum.out, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
    if (*s) run_synth(synth);
    if (*i) run_ingest(ingest);
    if (*t) run_train(train);
    if (*e) run_eval(eval);
    if (*tt) run_ttest(ttest);
    if (*c) run_cumulative(cum);
  } catch (const CLI::ParseError& err) {
    // help and version exit 0; every usage error maps to 2
    return app.exit(err) == 0 ? 0 : 2;
  } catch (const Failure& f) {
    std::cerr << "hcwmf: " << hcwmf_status_name(f.status) << ": " << hcwmf_last_error() << "\n";
    return 1;
  }
  return 0;
}
