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

#include "hcwmf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hcwmf/error.hpp"
#include "hcwmf/rng.hpp"

namespace hcwmf::baselines {

TransitionModel fit_markov(const SparseBinaryMatrix& x_train) {
  require(x_train.cols() >= 2,
          "fit_markov: need at least 2 columns, got " +
              std::to_string(x_train.cols()));
  // Counting only the transitions that touch a 1 keeps this O(nnz); the
  // 0 -> 0 count is what remains.
  double c01 = 0, c10 = 0, c11 = 0;
  const std::size_t m = x_train.cols();
  for (std::size_t i = 0; i < x_train.rows(); ++i) {
    auto r = x_train.row_entries(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      const std::size_t col = r[k].col;
      const bool left_is_one = k > 0 && r[k - 1].col + 1 == col;
      if (col > 0 && !left_is_one) c01 += 1;
      if (col + 1 < m) {
        const bool right_is_one = k + 1 < r.size() && r[k + 1].col == col + 1;
        (right_is_one ? c11 : c10) += 1;
      }
    }
  }
  const double total = static_cast<double>(x_train.rows()) *
                       static_cast<double>(m - 1);
  const double c00 = total - c01 - c10 - c11;

  TransitionModel model;
  auto normalize = [](double to0, double to1) -> std::array<double, 2> {
    const double s = to0 + to1;
    if (s <= 0) return {1.0, 0.0};
    return {to0 / s, to1 / s};
  };
  model.t[0] = normalize(c00, c01);
  model.t[1] = normalize(c10, c11);
  return model;
}

double predict_markov(const TransitionModel& model, int prev_state) {
  return model.p(prev_state != 0 ? 1 : 0, 1);
}

std::vector<double> predict_markov_cells(const TransitionModel& model,
                                         const SparseBinaryMatrix& x_train,
                                         std::span<const Cell> cells) {
  std::vector<double> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) {
    const int prev = (c.col > 0 && x_train.contains(c.row, c.col - 1)) ? 1 : 0;
    out.push_back(predict_markov(model, prev));
  }
  return out;
}

std::vector<double> random_predict(std::size_t n_cells, std::uint64_t seed) {
  require(n_cells >= 1, "random_predict: need at least one cell");
  Rng rng(seed);
  std::vector<double> out(n_cells);
  for (double& v : out) v = rng.coin() ? 1.0 : 0.0;
  return out;
}

namespace {

// Solves the symmetric system a x = b in place by Gaussian elimination with
// partial pivoting. Returns false when a pivot is negligible relative to the
// matrix scale.
bool solve(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  const double tiny = scale * 1e-12;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) <= tiny) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= factor * a[col][k];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * b[k];
    b[i] = s / a[i][i];
  }
  return true;
}

ArModel intercept_only(std::span<const double> series, std::size_t p) {
  ArModel m;
  m.order = p;
  m.phi.assign(p, 0.0);
  m.intercept_only = true;
  double s = 0.0;
  for (double v : series) s += v;
  m.intercept = series.empty() ? 0.0 : s / static_cast<double>(series.size());
  return m;
}

}  // namespace

ArModel fit_ar(std::span<const double> series, std::size_t p) {
  require(p >= 1, "fit_ar: order must be >= 1");
  require(series.size() > p, "fit_ar: series length " +
                                 std::to_string(series.size()) +
                                 " must exceed order " + std::to_string(p));
  for (double v : series) require(std::isfinite(v), "fit_ar: non-finite value");

  // Normal equations for regressors [1, x_{t-1}, ..., x_{t-p}].
  const std::size_t k = p + 1;
  std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
  std::vector<double> xty(k, 0.0);
  std::vector<double> z(k);
  for (std::size_t t = p; t < series.size(); ++t) {
    z[0] = 1.0;
    for (std::size_t i = 1; i <= p; ++i) z[i] = series[t - i];
    for (std::size_t a = 0; a < k; ++a) {
      xty[a] += z[a] * series[t];
      for (std::size_t b = 0; b < k; ++b) xtx[a][b] += z[a] * z[b];
    }
  }
  if (!solve(xtx, xty)) return intercept_only(series, p);

  ArModel m;
  m.order = p;
  m.intercept = xty[0];
  m.phi.assign(xty.begin() + 1, xty.end());
  for (double v : m.phi)
    if (!std::isfinite(v)) return intercept_only(series, p);
  return m;
}

double predict_ar(const ArModel& model, std::span<const double> history) {
  double y = model.intercept;
  for (std::size_t i = 1; i <= model.order && i <= history.size(); ++i) {
    y += model.phi[i - 1] * history[history.size() - i];
  }
  return y;
}

std::vector<double> predict_ar_cells(const SparseBinaryMatrix& x_train,
                                     std::span<const Cell> cells,
                                     std::size_t p) {
  std::map<std::size_t, ArModel> fits;
  std::vector<double> row(x_train.cols());
  std::vector<double> out;
  out.reserve(cells.size());
  std::size_t loaded = SIZE_MAX;
  auto load_row = [&](std::size_t i) {
    if (loaded == i) return;
    std::fill(row.begin(), row.end(), 0.0);
    for (const Cell& c : x_train.row_entries(i)) row[c.col] = 1.0;
    loaded = i;
  };
  for (const Cell& c : cells) {
    load_row(c.row);
    auto it = fits.find(c.row);
    if (it == fits.end()) {
      ArModel m = row.size() > p ? fit_ar(row, p) : intercept_only(row, p);
      it = fits.emplace(c.row, std::move(m)).first;
    }
    out.push_back(predict_ar(it->second, std::span<const double>(row).first(c.col)));
  }
  return out;
}

}  // namespace hcwmf::baselines
