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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hcwmf/dataio.hpp"
#include "hcwmf/error.hpp"
#include "hcwmf/factorization.hpp"
#include "hcwmf/rng.hpp"
#include "support/oracles.hpp"

using namespace hcwmf::factorization;
using hcwmf::linalg::Cell;
using hcwmf::masks::MaskPair;

namespace {

oracle::Grid to_grid(const DenseMatrix& m) {
  oracle::Grid g = oracle::zeros(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
  return g;
}

DenseMatrix from_grid(const oracle::Grid& g) {
  DenseMatrix m(g.size(), g[0].size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[i].size(); ++j) m(i, j) = g[i][j];
  return m;
}

TrainConfig zero_reg() {
  TrainConfig c;
  c.gamma1 = c.gamma2 = c.mu = 0.0;
  return c;
}

struct Instance {
  SparseBinaryMatrix x;
  MaskPair masks;
  FactorPair f;
};

Instance random_instance(std::size_t n, std::size_t m, std::size_t d, std::uint64_t seed) {
  hcwmf::Rng rng(seed);
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (rng.bernoulli(0.3)) cells.push_back({i, j});
  SparseBinaryMatrix x(n, m, cells);
  hcwmf::masks::HeldOutSet held;
  for (const auto& c : cells)
    if (rng.bernoulli(0.25)) held.cells.push_back(c);
  // the train matrix for G excludes held-out cells
  std::vector<Cell> kept;
  for (const auto& c : cells)
    if (std::find(held.cells.begin(), held.cells.end(), c) == held.cells.end()) kept.push_back(c);
  SparseBinaryMatrix train(n, m, kept);
  FactorPair f{DenseMatrix(n, d), DenseMatrix(m, d)};
  for (double& e : f.u.values()) e = rng.uniform();
  for (double& e : f.v.values()) e = rng.uniform();
  return {train, hcwmf::masks::build_masks(train, held), f};
}

double rel_error(const DenseMatrix& got, const oracle::Grid& want) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < got.rows(); ++i)
    for (std::size_t k = 0; k < got.cols(); ++k) {
      num += std::pow(got(i, k) - want[i][k], 2);
      den += want[i][k] * want[i][k];
    }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

SparseBinaryMatrix synthetic(std::size_t users, std::size_t bins, std::uint64_t seed) {
  hcwmf::dataio::SynthConfig sc;
  sc.n_users = users;
  sc.n_bins = bins;
  sc.burst_period = 1;
  sc.trend_decay = 0.05;
  sc.repeat_prob = 0.1;
  sc.seed = seed;
  auto rec = hcwmf::dataio::generate_synthetic(sc);
  return hcwmf::dataio::bin_records(rec, sc.hashtag, sc.bin_seconds, bins).x;
}

}  // namespace

TEST_CASE("objective worked examples") {
  SparseBinaryMatrix x(1, 1, {{0, 0}});
  MaskPair ones{DenseMatrix{{1}}, DenseMatrix{{1}}};
  auto cfg = zero_reg();
  cfg.mu = 1.0;
  CHECK(objective(x, ones, {DenseMatrix{{0}}, DenseMatrix{{0}}}, cfg) == 2.0);
  CHECK(objective(x, ones, {DenseMatrix{{1}}, DenseMatrix{{1}}}, cfg) == 0.0);

  TrainConfig reg;
  reg.mu = 0.0;
  CHECK(objective(x, ones, {DenseMatrix{{1}}, DenseMatrix{{1}}}, reg) == doctest::Approx(0.4));
}

TEST_CASE("objective agrees with the cell-by-cell oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto in = random_instance(6, 9, 3, seed);
    TrainConfig cfg;
    cfg.mu = 0.7;
    cfg.gamma1 = 0.3;
    cfg.gamma2 = 0.1;
    const double want =
        oracle::objective(to_grid(in.x.to_dense()), to_grid(in.masks.w), to_grid(in.masks.g),
                          to_grid(in.f.u), to_grid(in.f.v), 0.3, 0.1, 0.7);
    CHECK(objective(in.x, in.masks, in.f, cfg) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("gradient worked examples") {
  SparseBinaryMatrix x(1, 1, {{0, 0}});
  MaskPair ones{DenseMatrix{{1}}, DenseMatrix{{1}}};
  auto cfg = zero_reg();
  cfg.d = 1;
  auto g = grad_u(x, ones, {DenseMatrix{{0}}, DenseMatrix{{1}}}, cfg);
  CHECK(g(0, 0) == -2.0);
  CHECK(grad_u(x, ones, {DenseMatrix{{1}}, DenseMatrix{{1}}}, cfg)(0, 0) == 0.0);
  CHECK(grad_v(x, ones, {DenseMatrix{{1}}, DenseMatrix{{1}}}, cfg)(0, 0) == 0.0);
}

TEST_CASE("analytic gradients match central differences") {
  struct Shape {
    std::size_t n, m, d;
  };
  std::uint64_t seed = 100;
  for (Shape s : {Shape{5, 7, 2}, Shape{8, 12, 3}})
    for (double mu : {0.0, 0.2, 1.0}) {
      auto in = random_instance(s.n, s.m, s.d, ++seed);
      TrainConfig cfg;
      cfg.d = s.d;
      cfg.mu = mu;
      auto x = to_grid(in.x.to_dense()), w = to_grid(in.masks.w), g = to_grid(in.masks.g);
      auto u = to_grid(in.f.u), v = to_grid(in.f.v);
      auto f = [&] { return oracle::objective(x, w, g, u, v, cfg.gamma1, cfg.gamma2, mu); };
      auto fd_u = oracle::finite_difference(u, f);
      auto fd_v = oracle::finite_difference(v, f);
      CAPTURE(s.n);
      CAPTURE(mu);
      CHECK(rel_error(grad_u(in.x, in.masks, in.f, cfg), fd_u) < 1e-4);
      CHECK(rel_error(grad_v(in.x, in.masks, in.f, cfg), fd_v) < 1e-4);
    }
}

TEST_CASE("rank-1 fit of a single positive") {
  SparseBinaryMatrix x(1, 1, {{0, 0}});
  auto masks = hcwmf::masks::build_masks(x, {});
  auto cfg = zero_reg();
  cfg.d = 1;
  cfg.lambda = 0.05;
  cfg.max_iters = 5000;
  cfg.rel_tol = 1e-14;
  auto r = train(x, masks, cfg);
  CHECK(predict(r.factors)(0, 0) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("predict") {
  CHECK(predict({DenseMatrix{{1, 0}}, DenseMatrix{{0.5, 0}, {0, 1}}}) == DenseMatrix{{0.5, 0}});
  CHECK(predict({DenseMatrix(2, 3), DenseMatrix(4, 3)}) == DenseMatrix(2, 4));
}

TEST_CASE("training is deterministic and keeps factors non-negative") {
  auto x = synthetic(30, 40, 9);
  auto masks = hcwmf::masks::build_masks(x, {});
  TrainConfig cfg;
  cfg.d = 4;
  cfg.max_iters = 60;
  cfg.lambda = 0.01;
  auto a = train(x, masks, cfg);
  auto b = train(x, masks, cfg);
  CHECK(a.factors.u == b.factors.u);
  CHECK(a.factors.v == b.factors.v);
  CHECK(a.trace.objective_per_iter == b.trace.objective_per_iter);

  cfg.max_iters = 1;
  FactorPair f = initial_factors(x.rows(), x.cols(), cfg);
  for (int it = 0; it < 60; ++it) {
    f = train_from(x, masks, cfg, f).factors;
    for (double e : f.u.values()) REQUIRE(e >= 0.0);
    for (double e : f.v.values()) REQUIRE(e >= 0.0);
  }
}

TEST_CASE("objective trace is non-increasing at a small step") {
  auto x = synthetic(50, 100, 3);
  REQUIRE(x.nnz() > 0);
  auto masks = hcwmf::masks::build_masks(x, {});
  TrainConfig cfg;
  cfg.lambda = 1e-3;
  cfg.max_iters = 200;
  cfg.rel_tol = 1e-300;
  auto r = train(x, masks, cfg);
  REQUIRE(r.trace.iterations_run == 200);
  REQUIRE(r.trace.objective_per_iter.size() == 200);
  for (std::size_t i = 1; i < r.trace.objective_per_iter.size(); ++i)
    CHECK(r.trace.objective_per_iter[i] <= r.trace.objective_per_iter[i - 1]);
}

TEST_CASE("mu = 0 is plain WMF") {
  auto x = synthetic(20, 30, 5);
  auto masks = hcwmf::masks::build_masks(x, {});
  TrainConfig wmf;
  wmf.d = 3;
  wmf.mu = 0.0;
  wmf.max_iters = 50;
  auto a = train(x, masks, wmf);

  auto no_g = masks;
  no_g.g = DenseMatrix(x.rows(), x.cols(), 0.0);
  TrainConfig deleted = wmf;
  deleted.mu = 0.2;
  auto b = train(x, no_g, deleted);
  CHECK(a.trace.objective_per_iter == b.trace.objective_per_iter);
  CHECK(a.factors.u == b.factors.u);
}

TEST_CASE("convergence and the iteration cap") {
  auto x = synthetic(20, 30, 6);
  auto masks = hcwmf::masks::build_masks(x, {});
  TrainConfig cfg;
  cfg.d = 3;
  cfg.rel_tol = 1e-2;
  auto r = train(x, masks, cfg);
  CHECK(r.trace.converged);
  CHECK(r.trace.iterations_run < cfg.max_iters);
  CHECK(r.trace.objective_per_iter.size() == r.trace.iterations_run);

  cfg.rel_tol = 1e-300;
  cfg.max_iters = 7;
  r = train(x, masks, cfg);
  CHECK_FALSE(r.trace.converged);
  CHECK(r.trace.objective_per_iter.size() == 7);
}

TEST_CASE("bad configurations and divergence") {
  auto x = synthetic(10, 12, 2);
  auto masks = hcwmf::masks::build_masks(x, {});
  auto expect_invalid = [&](TrainConfig c) {
    try {
      train(x, masks, c);
      FAIL("expected an error");
    } catch (const hcwmf::Error& e) {
      CHECK(e.code() == hcwmf::ErrorCode::kInvalidArgument);
    }
  };
  TrainConfig c;
  c.d = 0;
  expect_invalid(c);
  c = {};
  c.lambda = 0;
  expect_invalid(c);
  c = {};
  c.mu = -1;
  expect_invalid(c);
  c = {};
  c.max_iters = 0;
  expect_invalid(c);
  c = {};
  c.rel_tol = 0;
  expect_invalid(c);

  c = {};
  // the projection clamps most overshoots to zero; only overflow is non-finite
  c.lambda = 1e200;
  c.max_iters = 5;
  try {
    train(x, masks, c);
    FAIL("expected divergence");
  } catch (const hcwmf::Error& e) {
    CHECK(e.code() == hcwmf::ErrorCode::kDiverged);
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }

  auto wrong = hcwmf::masks::build_masks(SparseBinaryMatrix(3, 3, {}), {});
  CHECK_THROWS_AS(train(x, wrong, TrainConfig{}), hcwmf::Error);
}

TEST_CASE("trace and factor dumps") {
  TrainTrace t{{3.5, 2.25}, 2, false};
  std::ostringstream os;
  write_trace_csv(os, t);
  CHECK(os.str() == "iteration,objective\n1,3.5\n2,2.25\n");

  std::ostringstream fs;
  write_factors_csv(fs, {DenseMatrix{{1, 0.5}}, DenseMatrix{{0.25, 2}, {0, 1}}});
  CHECK(fs.str() == "factor,index,c0,c1\nU,0,1,0.5\nV,0,0.25,2\nV,1,0,1\n");
}
