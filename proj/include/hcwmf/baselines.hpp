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

#ifndef HCWMF_BASELINES_HPP_
#define HCWMF_BASELINES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hcwmf/linalg.hpp"

namespace hcwmf::baselines {

using linalg::Cell;
using linalg::SparseBinaryMatrix;

// Two-state first-order chain; t[from][to], rows sum to 1.
struct TransitionModel {
  std::array<std::array<double, 2>, 2> t{};

  double p(int from, int to) const { return t[from][to]; }
};

// Pools consecutive-column transitions over all rows. A state that is never
// left defaults to [1, 0].
TransitionModel fit_markov(const SparseBinaryMatrix& x_train);

// P(prev_state -> 1).
double predict_markov(const TransitionModel& model, int prev_state);

// Prediction for every cell: the state of the left neighbor in the training
// matrix selects the row; column 0 uses state 0. Held-out neighbors are zero
// in the training matrix, so runs of held-out cells chain through state 0.
std::vector<double> predict_markov_cells(const TransitionModel& model,
                                         const SparseBinaryMatrix& x_train,
                                         std::span<const Cell> cells);

// Independent fair coins in {0, 1}.
std::vector<double> random_predict(std::size_t n_cells, std::uint64_t seed);

// x_t = c + sum_i phi_i x_{t-i}. The moving-average half of ARMA is not
// modeled.
struct ArModel {
  std::size_t order = 1;
  std::vector<double> phi;  // phi[0] multiplies x_{t-1}
  double intercept = 0.0;
  bool intercept_only = false;
};

// Ordinary least squares on lagged values. Falls back to the mean of the
// series (intercept-only) when the lag design is rank deficient.
ArModel fit_ar(std::span<const double> series, std::size_t p);

// `history` ends at x_{t-1}; missing lags (history shorter than p) count as 0.
double predict_ar(const ArModel& model, std::span<const double> history);

// Per-row AR fits on the binary training rows, one-step-ahead predictions
// for each cell from the columns before it. Rows with M <= p use the
// intercept-only model.
std::vector<double> predict_ar_cells(const SparseBinaryMatrix& x_train,
                                     std::span<const Cell> cells,
                                     std::size_t p = 2);

}  // namespace hcwmf::baselines

#endif  // HCWMF_BASELINES_HPP_
