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

#ifndef HCWMF_LINALG_HPP_
#define HCWMF_LINALG_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hcwmf::linalg {

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of `values`; throws unless it holds rows*cols finite values.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return values_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {values_.data() + i * cols_, cols_};
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  DenseMatrix transposed() const;

  std::string shape_string() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct Cell {
  std::size_t row;
  std::size_t col;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Binary matrix stored as the sorted set of its 1-coordinates.
class SparseBinaryMatrix {
 public:
  SparseBinaryMatrix() = default;
  /// Sorts `entries`; throws on out-of-range or duplicate coordinates.
  SparseBinaryMatrix(std::size_t rows, std::size_t cols,
                     std::vector<Cell> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  const std::vector<Cell>& entries() const noexcept { return entries_; }

  bool contains(std::size_t row, std::size_t col) const noexcept;

  // Entries of one row, in column order.
  std::span<const Cell> row_entries(std::size_t row) const noexcept;

  DenseMatrix to_dense() const;

  friend bool operator==(const SparseBinaryMatrix&,
                         const SparseBinaryMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Cell> entries_;
  std::vector<std::size_t> row_start_;  // rows_+1 offsets into entries_
};

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm_sq(const DenseMatrix& a);

// result(i, j) = sum_k u(i, k) * v(j, k), i.e. U V^T for U: N x d, V: M x d.
DenseMatrix low_rank_product(const DenseMatrix& u, const DenseMatrix& v);

// Same as above, written into `out` (resized if needed) to reuse storage in
// the training loop.
void low_rank_product_into(const DenseMatrix& u, const DenseMatrix& v,
                           DenseMatrix& out);

// out = a * b for a: N x M, b: M x d.
void multiply_into(const DenseMatrix& a, const DenseMatrix& b,
                   DenseMatrix& out);

// out = a^T * b for a: N x M, b: N x d.
void multiply_transposed_into(const DenseMatrix& a, const DenseMatrix& b,
                              DenseMatrix& out);

}  // namespace hcwmf::linalg

#endif  // HCWMF_LINALG_HPP_
