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

#include <limits>

#include "hcwmf/error.hpp"
#include "hcwmf/linalg.hpp"
#include "hcwmf/rng.hpp"

using namespace hcwmf::linalg;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, hcwmf::Rng& rng) {
  DenseMatrix m(r, c);
  for (double& e : m.values()) e = rng.uniform(-2.0, 2.0);
  return m;
}

}  // namespace

TEST_CASE("dense matrix construction rejects bad input") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}), hcwmf::Error);
  CHECK_THROWS_AS(DenseMatrix(1, 1, std::vector<double>{std::numeric_limits<double>::infinity()}),
                  hcwmf::Error);
  CHECK_THROWS_AS(DenseMatrix({{1, 2}, {3}}), hcwmf::Error);
  DenseMatrix m{{1, 2, 3}, {4, 5, 6}};
  CHECK(m.rows() == 2);
  CHECK(m(1, 2) == 6);
  CHECK(m.transposed()(2, 1) == 6);
  CHECK(m.shape_string() == "2x3");
}

TEST_CASE("hadamard") {
  DenseMatrix a{{1, 2}, {3, 4}};
  CHECK(hadamard(a, DenseMatrix{{0, 1}, {1, 0}}) == DenseMatrix{{0, 2}, {3, 0}});
  CHECK(hadamard(a, DenseMatrix(2, 2, 1.0)) == a);
  CHECK(hadamard(a, DenseMatrix(2, 2, 0.0)) == DenseMatrix(2, 2, 0.0));

  try {
    hadamard(a, DenseMatrix(3, 2));
    FAIL("expected a dimension error");
  } catch (const hcwmf::Error& e) {
    CHECK(e.code() == hcwmf::ErrorCode::kDimensionMismatch);
    CHECK(std::string(e.what()).find("2x2") != std::string::npos);
    CHECK(std::string(e.what()).find("3x2") != std::string::npos);
  }
}

TEST_CASE("hadamard is commutative and associative") {
  hcwmf::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_matrix(4, 5, rng), b = random_matrix(4, 5, rng), c = random_matrix(4, 5, rng);
    CHECK(hadamard(a, b) == hadamard(b, a));
    auto l = hadamard(hadamard(a, b), c), r = hadamard(a, hadamard(b, c));
    for (std::size_t k = 0; k < l.size(); ++k)
      CHECK(l.values()[k] == doctest::Approx(r.values()[k]).epsilon(1e-15));
  }
}

TEST_CASE("frobenius norm") {
  CHECK(frobenius_norm_sq(DenseMatrix{{3, 4}}) == 25);
  CHECK(frobenius_norm_sq(DenseMatrix(3, 3)) == 0);
  CHECK(frobenius_norm_sq(DenseMatrix{{1, 0}, {0, 1}}) == 2);
  hcwmf::Rng rng(3);
  auto a = random_matrix(6, 3, rng);
  DenseMatrix diff = a;
  for (std::size_t k = 0; k < diff.size(); ++k) diff.values()[k] -= a.values()[k];
  CHECK(frobenius_norm_sq(diff) == 0);
}

TEST_CASE("low rank product") {
  CHECK(low_rank_product(DenseMatrix{{1, 0}}, DenseMatrix{{0.5, 0}, {0, 1}}) ==
        DenseMatrix{{0.5, 0}});
  CHECK(low_rank_product(DenseMatrix(3, 2), DenseMatrix{{1, 2}, {3, 4}}) == DenseMatrix(3, 2));
  CHECK(low_rank_product(DenseMatrix{{1}, {2}}, DenseMatrix{{3}, {4}}) ==
        DenseMatrix{{3, 4}, {6, 8}});
  CHECK_THROWS_AS(low_rank_product(DenseMatrix(2, 2), DenseMatrix(2, 3)), hcwmf::Error);

  hcwmf::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto u = random_matrix(7, 3, rng), v = random_matrix(4, 3, rng);
    CHECK(low_rank_product(u, v).transposed() == low_rank_product(v, u));
  }
}

TEST_CASE("matrix products agree with loops") {
  hcwmf::Rng rng(8);
  auto a = random_matrix(5, 4, rng), b = random_matrix(4, 3, rng), c = random_matrix(5, 3, rng);
  DenseMatrix ab, atc;
  multiply_into(a, b, ab);
  multiply_transposed_into(a, c, atc);
  REQUIRE(ab.rows() == 5);
  REQUIRE(atc.rows() == 4);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      CHECK(ab(i, j) == doctest::Approx(s).epsilon(1e-14));
    }
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 5; ++k) s += a(k, i) * c(k, j);
      CHECK(atc(i, j) == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("sparse binary matrix") {
  SparseBinaryMatrix x(3, 4, {{2, 1}, {0, 3}, {0, 0}});
  CHECK(x.nnz() == 3);
  CHECK(x.entries().front() == Cell{0, 0});
  CHECK(x.contains(0, 3));
  CHECK_FALSE(x.contains(1, 1));
  CHECK(x.row_entries(0).size() == 2);
  CHECK(x.row_entries(1).empty());
  auto d = x.to_dense();
  CHECK(d(2, 1) == 1);
  CHECK(frobenius_norm_sq(d) == 3);

  CHECK_THROWS_AS(SparseBinaryMatrix(2, 2, {{2, 0}}), hcwmf::Error);
  CHECK_THROWS_AS(SparseBinaryMatrix(2, 2, {{0, 2}}), hcwmf::Error);
  CHECK_THROWS_AS(SparseBinaryMatrix(2, 2, {{1, 1}, {1, 1}}), hcwmf::Error);
  CHECK(SparseBinaryMatrix(2, 2, {}).nnz() == 0);
}
