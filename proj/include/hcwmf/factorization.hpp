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

#ifndef HCWMF_FACTORIZATION_HPP_
#define HCWMF_FACTORIZATION_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hcwmf/linalg.hpp"
#include "hcwmf/masks.hpp"

namespace hcwmf::factorization {

using linalg::DenseMatrix;
using linalg::SparseBinaryMatrix;
using masks::MaskPair;

struct TrainConfig {
  std::size_t d = 10;
  double gamma1 = 0.2;
  double gamma2 = 0.2;
  double mu = 0.2;  // consistency weight; 0 gives plain WMF
  double lambda = 0.001;
  std::size_t max_iters = 500;
  double rel_tol = 1e-6;
  std::uint64_t seed = 42;

  void validate() const;
};

// Non-negative factors: U is N x d, V is M x d.
struct FactorPair {
  DenseMatrix u;
  DenseMatrix v;
};

struct TrainTrace {
  std::vector<double> objective_per_iter;
  std::size_t iterations_run = 0;
  bool converged = false;
};

struct TrainResult {
  FactorPair factors;
  TrainTrace trace;
};

// ||W.(X - UV^T)||^2 + g1 ||U||^2 + g2 ||V||^2 + mu ||G.(1 - UV^T)||^2
double objective(const SparseBinaryMatrix& x, const MaskPair& masks,
                 const FactorPair& f, const TrainConfig& cfg);

// Exact derivatives of objective():
//   dL/dU = -2 (W.(X - P)) V - 2 mu (G.G.(1 - P)) V + 2 g1 U
//   dL/dV = -2 (W.(X - P))^T U - 2 mu (G.G.(1 - P))^T U + 2 g2 V
// with P = UV^T.
DenseMatrix grad_u(const SparseBinaryMatrix& x, const MaskPair& masks,
                   const FactorPair& f, const TrainConfig& cfg);
DenseMatrix grad_v(const SparseBinaryMatrix& x, const MaskPair& masks,
                   const FactorPair& f, const TrainConfig& cfg);

// Uniform [0, 1/sqrt(d)) entries from cfg.seed.
FactorPair initial_factors(std::size_t n, std::size_t m,
                           const TrainConfig& cfg);

// Alternating projected gradient descent:
//   U <- max(0, U - lambda dL/dU);  V <- max(0, V - lambda dL/dV)
// until |L_t - L_{t-1}| / L_{t-1} < rel_tol or max_iters. Throws
// ErrorCode::kDiverged if the objective stops being finite.
TrainResult train(const SparseBinaryMatrix& x, const MaskPair& masks,
                  const TrainConfig& cfg);

// Same loop from caller-provided starting factors.
TrainResult train_from(const SparseBinaryMatrix& x, const MaskPair& masks,
                       const TrainConfig& cfg, FactorPair start);

// X~ = U V^T.
DenseMatrix predict(const FactorPair& f);

void write_trace_csv(std::ostream& os, const TrainTrace& trace);
void write_factors_csv(std::ostream& os, const FactorPair& f);

}  // namespace hcwmf::factorization

#endif  // HCWMF_FACTORIZATION_HPP_
