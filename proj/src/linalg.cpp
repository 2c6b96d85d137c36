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

#include "hcwmf/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "hcwmf/error.hpp"

namespace hcwmf::linalg {

namespace {

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                      const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kDimensionMismatch, std::string(op) + ": shape " +
                                            a.shape_string() + " vs " +
                                            b.shape_string());
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {
  require(std::isfinite(fill), "DenseMatrix: non-finite fill value");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    fail(ErrorCode::kDimensionMismatch,
         "DenseMatrix: " + std::to_string(values_.size()) +
             " values for shape " + shape_string());
  }
  for (double v : values_) require(std::isfinite(v), "DenseMatrix: non-finite value");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      fail(ErrorCode::kDimensionMismatch, "DenseMatrix: ragged initializer");
    }
    for (double v : r) {
      require(std::isfinite(v), "DenseMatrix: non-finite value");
      values_.push_back(v);
    }
  }
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::string DenseMatrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

SparseBinaryMatrix::SparseBinaryMatrix(std::size_t rows, std::size_t cols,
                                       std::vector<Cell> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Cell& c = entries_[k];
    if (c.row >= rows_ || c.col >= cols_) {
      fail(ErrorCode::kInvalidArgument,
           "SparseBinaryMatrix: coordinate (" + std::to_string(c.row) + ", " +
               std::to_string(c.col) + ") outside " + std::to_string(rows_) +
               "x" + std::to_string(cols_));
    }
    if (k > 0 && entries_[k - 1] == c) {
      fail(ErrorCode::kInvalidArgument,
           "SparseBinaryMatrix: duplicate coordinate (" +
               std::to_string(c.row) + ", " + std::to_string(c.col) + ")");
    }
  }
  row_start_.assign(rows_ + 1, 0);
  for (const Cell& c : entries_) ++row_start_[c.row + 1];
  for (std::size_t i = 0; i < rows_; ++i) row_start_[i + 1] += row_start_[i];
}

bool SparseBinaryMatrix::contains(std::size_t row, std::size_t col) const noexcept {
  if (row >= rows_) return false;
  auto r = row_entries(row);
  return std::binary_search(r.begin(), r.end(), Cell{row, col});
}

std::span<const Cell> SparseBinaryMatrix::row_entries(std::size_t row) const noexcept {
  if (row >= rows_) return {};
  return {entries_.data() + row_start_[row], row_start_[row + 1] - row_start_[row]};
}

DenseMatrix SparseBinaryMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (const Cell& c : entries_) d(c.row, c.col) = 1.0;
  return d;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "hadamard");
  DenseMatrix out(a.rows(), a.cols());
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t k = 0; k < ov.size(); ++k) ov[k] = av[k] * bv[k];
  return out;
}

double frobenius_norm_sq(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return s;
}

DenseMatrix low_rank_product(const DenseMatrix& u, const DenseMatrix& v) {
  DenseMatrix out;
  low_rank_product_into(u, v, out);
  return out;
}

void low_rank_product_into(const DenseMatrix& u, const DenseMatrix& v,
                           DenseMatrix& out) {
  if (u.cols() != v.cols()) {
    fail(ErrorCode::kDimensionMismatch,
         "low_rank_product: inner dimension " + u.shape_string() + " vs " +
             v.shape_string());
  }
  if (out.rows() != u.rows() || out.cols() != v.rows()) {
    out = DenseMatrix(u.rows(), v.rows());
  }
  const std::size_t d = u.cols();
  for (std::size_t i = 0; i < u.rows(); ++i) {
    auto ui = u.row(i);
    auto oi = out.row(i);
    for (std::size_t j = 0; j < v.rows(); ++j) {
      auto vj = v.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += ui[k] * vj[k];
      oi[j] = s;
    }
  }
}

void multiply_into(const DenseMatrix& a, const DenseMatrix& b,
                   DenseMatrix& out) {
  if (a.cols() != b.rows()) {
    fail(ErrorCode::kDimensionMismatch,
         "multiply: " + a.shape_string() + " * " + b.shape_string());
  }
  if (out.rows() != a.rows() || out.cols() != b.cols()) {
    out = DenseMatrix(a.rows(), b.cols());
  }
  std::fill(out.values().begin(), out.values().end(), 0.0);
  const std::size_t d = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    auto oi = out.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double x = ai[j];
      if (x == 0.0) continue;
      auto bj = b.row(j);
      for (std::size_t k = 0; k < d; ++k) oi[k] += x * bj[k];
    }
  }
}

void multiply_transposed_into(const DenseMatrix& a, const DenseMatrix& b,
                              DenseMatrix& out) {
  if (a.rows() != b.rows()) {
    fail(ErrorCode::kDimensionMismatch,
         "multiply_transposed: " + a.shape_string() + "^T * " +
             b.shape_string());
  }
  if (out.rows() != a.cols() || out.cols() != b.cols()) {
    out = DenseMatrix(a.cols(), b.cols());
  }
  std::fill(out.values().begin(), out.values().end(), 0.0);
  const std::size_t d = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    auto bi = b.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double x = ai[j];
      if (x == 0.0) continue;
      auto oj = out.row(j);
      for (std::size_t k = 0; k < d; ++k) oj[k] += x * bi[k];
    }
  }
}

}  // namespace hcwmf::linalg
