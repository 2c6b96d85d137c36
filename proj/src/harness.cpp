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

#include "hcwmf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <thread>

#include "hcwmf/baselines.hpp"
#include "hcwmf/error.hpp"
#include "hcwmf/rng.hpp"
#include "text.hpp"

namespace hcwmf::harness {

namespace {

constexpr std::uint64_t kSplitTag = 1;
constexpr std::uint64_t kTrainTag = 2;
constexpr std::uint64_t kRandomTag = 3;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::vector<ResultRow> run_cell(const SparseBinaryMatrix& x, const SweepSpec& spec,
                                double fraction, std::size_t d) {
  const std::uint64_t fraction_bits = std::bit_cast<std::uint64_t>(fraction);
  std::vector<ResultRow> rows;
  auto row_for = [&](Method m) {
    ResultRow r;
    r.dataset = spec.dataset;
    r.method = std::string(method_name(m));
    r.fraction = fraction;
    r.d = d;
    return r;
  };

  std::optional<Split> split;
  std::string split_error;
  try {
    split = split_mask(x, {fraction, derive_seed(spec.seed, {kSplitTag, fraction_bits})});
  } catch (const std::exception& e) {
    split_error = e.what();
  }

  factorization::TrainConfig cfg = spec.base;
  cfg.d = d;
  cfg.seed = derive_seed(spec.seed, {kTrainTag, fraction_bits, d});
  const std::uint64_t random_seed =
      derive_seed(spec.seed, {kRandomTag, fraction_bits, d});

  for (Method m : spec.methods) {
    ResultRow r = row_for(m);
    if (!split) {
      r.rmse = std::numeric_limits<double>::quiet_NaN();
      r.error = split_error;
      rows.push_back(std::move(r));
      continue;
    }
    try {
      const auto predicted =
          predict_held_out(m, *split, cfg, random_seed, spec.clamp, spec.ar_order);
      const std::vector<double> actual(predicted.size(), 1.0);
      r.rmse = rmse(predicted, actual);
      if (!std::isfinite(r.rmse)) fail(ErrorCode::kDiverged, "non-finite RMSE");
    } catch (const std::exception& e) {
      r.rmse = std::numeric_limits<double>::quiet_NaN();
      r.error = e.what();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kHcwmf: return "hCWMF";
    case Method::kWmf: return "WMF";
    case Method::kAr: return "AR";
    case Method::kMarkov: return "MC";
    case Method::kRandom: return "Random";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  const std::string n = lower(text::trim(name));
  if (n == "hcwmf") return Method::kHcwmf;
  if (n == "wmf") return Method::kWmf;
  if (n == "ar" || n == "arma") return Method::kAr;
  if (n == "mc" || n == "markov") return Method::kMarkov;
  if (n == "random") return Method::kRandom;
  return std::nullopt;
}

std::vector<Method> all_methods() {
  return {Method::kHcwmf, Method::kWmf, Method::kAr, Method::kMarkov, Method::kRandom};
}

Split split_mask(const SparseBinaryMatrix& x, const SplitSpec& spec) {
  require(spec.fraction > 0.0 && spec.fraction < 100.0,
          "split_mask: fraction must lie in (0, 100)");
  require(x.nnz() >= 1, "split_mask: matrix has no positive entries");
  const std::size_t n = x.nnz();
  const auto k = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(spec.fraction / 100.0 * static_cast<double>(n))),
      1, n);

  // Partial Fisher-Yates: the first k slots become the held-out sample.
  std::vector<linalg::Cell> pool = x.entries();
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  Split out;
  out.held_out.cells.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.held_out.cells.begin(), out.held_out.cells.end());
  std::vector<linalg::Cell> kept(pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end());
  out.train = SparseBinaryMatrix(x.rows(), x.cols(), std::move(kept));
  return out;
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  require(!predicted.empty(), "rmse: empty input");
  require(predicted.size() == actual.size(),
          "rmse: length mismatch " + std::to_string(predicted.size()) + " vs " +
              std::to_string(actual.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double e = predicted[i] - actual[i];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(predicted.size()));
}

const ResultRow* ResultsTable::find(std::string_view method, double fraction,
                                    std::size_t d) const {
  for (const auto& r : rows)
    if (r.method == method && r.fraction == fraction && r.d == d) return &r;
  return nullptr;
}

std::vector<double> predict_held_out(Method method, const Split& split,
                                     const factorization::TrainConfig& cfg,
                                     std::uint64_t random_seed, bool clamp,
                                     std::size_t ar_order) {
  const auto& cells = split.held_out.cells;
  switch (method) {
    case Method::kHcwmf:
    case Method::kWmf: {
      factorization::TrainConfig c = cfg;
      if (method == Method::kWmf) c.mu = 0.0;
      const auto masks = masks::build_masks(split.train, split.held_out);
      const auto fit = factorization::train(split.train, masks, c);
      const auto& u = fit.factors.u;
      const auto& v = fit.factors.v;
      std::vector<double> out;
      out.reserve(cells.size());
      for (const auto& cell : cells) {
        double p = 0.0;
        auto ui = u.row(cell.row);
        auto vj = v.row(cell.col);
        for (std::size_t k = 0; k < ui.size(); ++k) p += ui[k] * vj[k];
        out.push_back(clamp ? std::clamp(p, 0.0, 1.0) : p);
      }
      return out;
    }
    case Method::kAr:
      return baselines::predict_ar_cells(split.train, cells, ar_order);
    case Method::kMarkov:
      return baselines::predict_markov_cells(baselines::fit_markov(split.train),
                                             split.train, cells);
    case Method::kRandom:
      return baselines::random_predict(cells.size(), random_seed);
  }
  fail(ErrorCode::kInvalidArgument, "unknown method");
}

ResultsTable run_sweep(const SparseBinaryMatrix& x, const SweepSpec& spec) {
  require(!spec.methods.empty(), "run_sweep: no methods requested");
  require(!spec.fractions.empty(), "run_sweep: no fractions requested");
  for (double f : spec.fractions)
    require(f > 0.0 && f < 100.0, "run_sweep: fraction " + text::format_double(f) +
                                      " outside (0, 100)");
  spec.base.validate();
  std::vector<std::size_t> dims = spec.dims;
  if (dims.empty()) dims.push_back(spec.base.d);
  for (std::size_t d : dims) require(d >= 1, "run_sweep: latent dimension must be >= 1");

  struct CellKey {
    double fraction;
    std::size_t d;
  };
  std::vector<CellKey> keys;
  for (double f : spec.fractions)
    for (std::size_t d : dims) keys.push_back({f, d});

  std::vector<std::vector<ResultRow>> results(keys.size());
  std::size_t workers = spec.threads != 0 ? spec.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, keys.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      results[i] = run_cell(x, spec, keys[i].fraction, keys[i].d);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  ResultsTable table;
  for (auto& cell : results)
    for (auto& row : cell) table.rows.push_back(std::move(row));
  return table;
}

void write_results_csv(std::ostream& out, const ResultsTable& table) {
  out << "dataset,method,fraction,d,rmse\n";
  for (const auto& r : table.rows) {
    out << csv_field(r.dataset) << ',' << csv_field(r.method) << ','
        << text::format_double(r.fraction) << ',' << r.d << ','
        << (r.ok() ? text::format_double(r.rmse) : std::string("nan")) << '\n';
  }
}

ResultsTable read_results_csv(std::istream& in) {
  if (!in) fail(ErrorCode::kIo, "read_results_csv: unreadable stream");
  std::string line;
  if (!std::getline(in, line) || text::trim(line) != "dataset,method,fraction,d,rmse") {
    fail(ErrorCode::kParse, "results CSV: missing header");
  }
  ResultsTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    auto f = split_csv_line(line);
    auto bad = [&](const char* why) {
      fail(ErrorCode::kParse, "results CSV line " + std::to_string(lineno) + ": " + why);
    };
    if (f.size() != 5) bad("expected 5 fields");
    ResultRow r;
    r.dataset = f[0];
    r.method = f[1];
    auto fraction = text::parse_number<double>(f[2]);
    auto d = text::parse_number<std::size_t>(f[3]);
    auto value = text::parse_number<double>(f[4]);
    if (!fraction || !d || !value) bad("non-numeric field");
    r.fraction = *fraction;
    r.d = *d;
    r.rmse = *value;
    if (std::isnan(r.rmse)) r.error = "error";
    table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace hcwmf::harness
