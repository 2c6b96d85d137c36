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

#include <algorithm>

#include "hcwmf/error.hpp"
#include "hcwmf/masks.hpp"
#include "hcwmf/rng.hpp"
#include "support/oracles.hpp"

using namespace hcwmf::masks;

namespace {

SparseBinaryMatrix from_rows(const std::vector<std::vector<int>>& rows) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (rows[i][j]) cells.push_back({i, j});
  return SparseBinaryMatrix(rows.size(), rows.at(0).size(), cells);
}

std::vector<double> row_of(const DenseMatrix& m, std::size_t i) {
  auto r = m.row(i);
  return {r.begin(), r.end()};
}

}  // namespace

TEST_CASE("indicator") {
  CHECK(build_indicator(2, 2, {{{0, 1}}}) == DenseMatrix{{1, 0}, {1, 1}});
  CHECK(build_indicator(2, 3, {}) == DenseMatrix(2, 3, 1.0));
  CHECK(build_indicator(2, 2, {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}}) == DenseMatrix(2, 2, 0.0));
  CHECK_THROWS_AS(build_indicator(2, 2, {{{2, 0}}}), hcwmf::Error);
}

TEST_CASE("attenuation worked examples") {
  auto g = build_attenuation(from_rows({{1, 0, 0}}));
  CHECK(row_of(g, 0) == std::vector<double>{1, 0.5, 0});

  g = build_attenuation(from_rows({{0, 1, 0, 0, 0}}));
  CHECK(g(0, 0) == 0);
  CHECK(g(0, 1) == 1);
  CHECK(g(0, 2) == doctest::Approx(2.0 / 3.0));
  CHECK(g(0, 3) == doctest::Approx(0.5));
  CHECK(g(0, 4) == 0);

  g = build_attenuation(from_rows({{0, 0, 0, 0}}));
  CHECK(row_of(g, 0) == std::vector<double>(4, 0.0));

  // later positives do not restart the ramp
  g = build_attenuation(from_rows({{0, 1, 0, 1, 1}}));
  CHECK(row_of(g, 0) == oracle::attenuation_row({0, 1, 0, 1, 1}));
}

TEST_CASE("attenuation matches the definition on random rows") {
  hcwmf::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.below(30);
    std::vector<std::vector<int>> rows(1 + rng.below(5), std::vector<int>(m, 0));
    for (auto& r : rows)
      for (auto& e : r) e = rng.bernoulli(0.15);
    auto g = build_attenuation(from_rows(rows));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto want = oracle::attenuation_row(rows[i]);
      for (std::size_t j = 0; j < m; ++j) CHECK(g(i, j) == doctest::Approx(want[j]).epsilon(1e-15));
    }
  }
}

TEST_CASE("held-out first positives leave no trace in g") {
  hcwmf::Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> row(20, 0);
    for (auto& e : row) e = rng.bernoulli(0.3);
    auto first = std::find(row.begin(), row.end(), 1);
    if (first == row.end()) continue;
    const auto masked = static_cast<std::size_t>(first - row.begin());
    *first = 0;
    auto g = build_attenuation(from_rows({row}));
    auto next = std::find(row.begin(), row.end(), 1);
    const auto anchor = static_cast<std::size_t>(next - row.begin());
    for (std::size_t j = masked; j < std::min(anchor, row.size()); ++j) CHECK(g(0, j) == 0);
    CHECK(row_of(g, 0) == oracle::attenuation_row(row));
  }
}

TEST_CASE("build_masks pairs W with G of the training matrix") {
  auto x = from_rows({{0, 1, 0, 1}, {1, 0, 0, 0}});
  auto masks = build_masks(x, {{{1, 3}}});
  CHECK(masks.w(1, 3) == 0);
  CHECK(frobenius_norm_sq(masks.w) == 7);
  CHECK(masks.g == build_attenuation(x));
}
