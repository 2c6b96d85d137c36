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

#ifndef HCWMF_HARNESS_HPP_
#define HCWMF_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcwmf/factorization.hpp"
#include "hcwmf/linalg.hpp"
#include "hcwmf/masks.hpp"

namespace hcwmf::harness {

using linalg::SparseBinaryMatrix;
using masks::HeldOutSet;

enum class Method { kHcwmf, kWmf, kAr, kMarkov, kRandom };

std::string_view method_name(Method m);
// Accepts the canonical names case-insensitively, plus "arma" and "markov".
std::optional<Method> parse_method(std::string_view name);
std::vector<Method> all_methods();

struct SplitSpec {
  double fraction = 30.0;  // percent of positives held out, in (0, 100)
  std::uint64_t seed = 1;
};

struct Split {
  SparseBinaryMatrix train;
  HeldOutSet held_out;
};

// Holds out round(fraction% of nnz) positives (at least one), sampled
// uniformly without replacement.
Split split_mask(const SparseBinaryMatrix& x, const SplitSpec& spec);

double rmse(std::span<const double> predicted, std::span<const double> actual);

struct ResultRow {
  std::string dataset;
  std::string method;
  double fraction = 0.0;
  std::size_t d = 0;
  double rmse = 0.0;   // NaN on error rows
  std::string error;   // empty on success

  bool ok() const { return error.empty(); }
};

struct ResultsTable {
  std::vector<ResultRow> rows;

  const ResultRow* find(std::string_view method, double fraction,
                        std::size_t d) const;
};

struct SweepSpec {
  std::string dataset = "synthetic";
  std::vector<Method> methods;
  std::vector<double> fractions;
  std::vector<std::size_t> dims;  // empty: base.d only
  factorization::TrainConfig base;
  std::uint64_t seed = 1;
  bool clamp = false;        // clamp factorization predictions to [0, 1]
  std::size_t ar_order = 2;
  std::size_t threads = 0;   // 0: hardware concurrency
};

// Per (fraction, d) cell: split with a seed derived from (seed, fraction),
// W and G from the training matrix, every method scored on the same held-out
// cells against 1. A method that throws yields an error row.
ResultsTable run_sweep(const SparseBinaryMatrix& x, const SweepSpec& spec);

// Predictions for `method` at the held-out cells of one split.
std::vector<double> predict_held_out(Method method, const Split& split,
                                     const factorization::TrainConfig& cfg,
                                     std::uint64_t random_seed, bool clamp,
                                     std::size_t ar_order = 2);

// CSV with header "dataset,method,fraction,d,rmse"; error rows carry "nan".
void write_results_csv(std::ostream& out, const ResultsTable& table);
ResultsTable read_results_csv(std::istream& in);

}  // namespace hcwmf::harness

#endif  // HCWMF_HARNESS_HPP_
