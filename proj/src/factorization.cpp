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

#include "hcwmf/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "hcwmf/error.hpp"
#include "hcwmf/rng.hpp"
#include "text.hpp"

namespace hcwmf::factorization {

namespace {

void check_dims(const SparseBinaryMatrix& x, const MaskPair& masks,
                const FactorPair& f) {
  const std::size_t n = x.rows(), m = x.cols();
  auto mismatch = [&](const std::string& what) {
    fail(ErrorCode::kDimensionMismatch,
         what + " does not match X (" + std::to_string(n) + "x" +
             std::to_string(m) + ")");
  };
  if (masks.w.rows() != n || masks.w.cols() != m)
    mismatch("W " + masks.w.shape_string());
  if (masks.g.rows() != n || masks.g.cols() != m)
    mismatch("G " + masks.g.shape_string());
  if (f.u.rows() != n) mismatch("U " + f.u.shape_string());
  if (f.v.rows() != m) mismatch("V " + f.v.shape_string());
  if (f.u.cols() != f.v.cols()) {
    fail(ErrorCode::kDimensionMismatch, "factor ranks differ: U " +
                                            f.u.shape_string() + ", V " +
                                            f.v.shape_string());
  }
}

// Dense copies of the fixed inputs plus scratch buffers reused across
// iterations.
class Workspace {
 public:
  Workspace(const SparseBinaryMatrix& x, const MaskPair& masks, double mu)
      : x_(x.to_dense()), w_(masks.w), g_(masks.g), g2_(masks.g), mu_(mu) {
    for (double& v : g2_.values()) v *= v;
  }

  // Recomputes P = UV^T.
  void refresh(const FactorPair& f) { linalg::low_rank_product_into(f.u, f.v, p_); }

  // Loss terms at the current P.
  double objective(const FactorPair& f, const TrainConfig& cfg) const {
    auto xv = x_.values(), wv = w_.values(), gv = g_.values(), pv = p_.values();
    double fit = 0.0, consistency = 0.0;
    for (std::size_t k = 0; k < pv.size(); ++k) {
      const double r = wv[k] * (xv[k] - pv[k]);
      const double c = gv[k] * (1.0 - pv[k]);
      fit += r * r;
      consistency += c * c;
    }
    return fit + cfg.gamma1 * linalg::frobenius_norm_sq(f.u) +
           cfg.gamma2 * linalg::frobenius_norm_sq(f.v) + mu_ * consistency;
  }

  // E = W.(X - P) + mu G.G.(1 - P); both gradients are -2 E-products plus
  // the ridge terms.
  const DenseMatrix& residual() {
    if (e_.rows() != p_.rows() || e_.cols() != p_.cols())
      e_ = DenseMatrix(p_.rows(), p_.cols());
    auto xv = x_.values(), wv = w_.values(), g2v = g2_.values(),
         pv = p_.values();
    auto ev = e_.values();
    for (std::size_t k = 0; k < ev.size(); ++k) {
      ev[k] = wv[k] * (xv[k] - pv[k]) + mu_ * g2v[k] * (1.0 - pv[k]);
    }
    return e_;
  }

  void grad_u(const FactorPair& f, double gamma1, DenseMatrix& out) {
    linalg::multiply_into(residual(), f.v, out);
    finish(out, f.u, gamma1);
  }

  void grad_v(const FactorPair& f, double gamma2, DenseMatrix& out) {
    linalg::multiply_transposed_into(residual(), f.u, out);
    finish(out, f.v, gamma2);
  }

 private:
  static void finish(DenseMatrix& out, const DenseMatrix& factor, double gamma) {
    auto ov = out.values();
    auto fv = factor.values();
    for (std::size_t k = 0; k < ov.size(); ++k)
      ov[k] = -2.0 * ov[k] + 2.0 * gamma * fv[k];
  }

  DenseMatrix x_, w_, g_, g2_;
  double mu_;
  DenseMatrix p_, e_;
};

void projected_step(DenseMatrix& factor, const DenseMatrix& grad,
                    double lambda) {
  auto fv = factor.values();
  auto gv = grad.values();
  for (std::size_t k = 0; k < fv.size(); ++k)
    fv[k] = std::max(0.0, fv[k] - lambda * gv[k]);
}

}  // namespace

void TrainConfig::validate() const {
  require(d >= 1, "TrainConfig: d must be >= 1");
  require(gamma1 >= 0.0 && std::isfinite(gamma1), "TrainConfig: gamma1 must be >= 0");
  require(gamma2 >= 0.0 && std::isfinite(gamma2), "TrainConfig: gamma2 must be >= 0");
  require(mu >= 0.0 && std::isfinite(mu), "TrainConfig: mu must be >= 0");
  require(lambda > 0.0 && std::isfinite(lambda), "TrainConfig: lambda must be > 0");
  require(max_iters >= 1, "TrainConfig: max_iters must be >= 1");
  require(rel_tol > 0.0, "TrainConfig: rel_tol must be > 0");
}

double objective(const SparseBinaryMatrix& x, const MaskPair& masks,
                 const FactorPair& f, const TrainConfig& cfg) {
  check_dims(x, masks, f);
  Workspace ws(x, masks, cfg.mu);
  ws.refresh(f);
  return ws.objective(f, cfg);
}

DenseMatrix grad_u(const SparseBinaryMatrix& x, const MaskPair& masks,
                   const FactorPair& f, const TrainConfig& cfg) {
  check_dims(x, masks, f);
  Workspace ws(x, masks, cfg.mu);
  ws.refresh(f);
  DenseMatrix out;
  ws.grad_u(f, cfg.gamma1, out);
  return out;
}

DenseMatrix grad_v(const SparseBinaryMatrix& x, const MaskPair& masks,
                   const FactorPair& f, const TrainConfig& cfg) {
  check_dims(x, masks, f);
  Workspace ws(x, masks, cfg.mu);
  ws.refresh(f);
  DenseMatrix out;
  ws.grad_v(f, cfg.gamma2, out);
  return out;
}

FactorPair initial_factors(std::size_t n, std::size_t m,
                           const TrainConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.d));
  FactorPair f{DenseMatrix(n, cfg.d), DenseMatrix(m, cfg.d)};
  for (double& v : f.u.values()) v = scale * rng.uniform();
  for (double& v : f.v.values()) v = scale * rng.uniform();
  return f;
}

TrainResult train(const SparseBinaryMatrix& x, const MaskPair& masks,
                  const TrainConfig& cfg) {
  cfg.validate();
  return train_from(x, masks, cfg, initial_factors(x.rows(), x.cols(), cfg));
}

TrainResult train_from(const SparseBinaryMatrix& x, const MaskPair& masks,
                       const TrainConfig& cfg, FactorPair start) {
  cfg.validate();
  require(x.rows() > 0 && x.cols() > 0, "train: empty matrix");
  check_dims(x, masks, start);

  TrainResult result{std::move(start), {}};
  FactorPair& f = result.factors;
  TrainTrace& trace = result.trace;
  trace.objective_per_iter.reserve(cfg.max_iters);

  Workspace ws(x, masks, cfg.mu);
  ws.refresh(f);
  double previous = ws.objective(f, cfg);
  if (!std::isfinite(previous)) {
    fail(ErrorCode::kDiverged, "train: non-finite objective at initialization");
  }

  DenseMatrix gu, gv;
  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    ws.grad_u(f, cfg.gamma1, gu);
    projected_step(f.u, gu, cfg.lambda);
    ws.refresh(f);
    ws.grad_v(f, cfg.gamma2, gv);
    projected_step(f.v, gv, cfg.lambda);
    ws.refresh(f);

    const double current = ws.objective(f, cfg);
    if (!std::isfinite(current)) {
      fail(ErrorCode::kDiverged,
           "train: objective became non-finite at iteration " +
               std::to_string(it) + " (lambda " + text::format_double(cfg.lambda) +
               " is likely too large)");
    }
    trace.objective_per_iter.push_back(current);
    trace.iterations_run = it;

    const double denom = std::max(std::abs(previous), 1e-300);
    if (std::abs(previous - current) / denom < cfg.rel_tol) {
      trace.converged = true;
      break;
    }
    previous = current;
  }
  return result;
}

DenseMatrix predict(const FactorPair& f) {
  return linalg::low_rank_product(f.u, f.v);
}

void write_trace_csv(std::ostream& os, const TrainTrace& trace) {
  os << "iteration,objective\n";
  for (std::size_t i = 0; i < trace.objective_per_iter.size(); ++i) {
    os << (i + 1) << ',' << text::format_double(trace.objective_per_iter[i])
       << '\n';
  }
}

void write_factors_csv(std::ostream& os, const FactorPair& f) {
  os << "factor,index";
  for (std::size_t k = 0; k < f.u.cols(); ++k) os << ",c" << k;
  os << '\n';
  auto dump = [&os](const char* name, const DenseMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      os << name << ',' << i;
      for (double v : m.row(i)) os << ',' << text::format_double(v);
      os << '\n';
    }
  };
  dump("U", f.u);
  dump("V", f.v);
}

}  // namespace hcwmf::factorization
