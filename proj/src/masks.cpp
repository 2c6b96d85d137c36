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

#include "hcwmf/masks.hpp"

#include <string>

#include "hcwmf/error.hpp"

namespace hcwmf::masks {

DenseMatrix build_indicator(std::size_t rows, std::size_t cols,
                            const HeldOutSet& held_out) {
  DenseMatrix w(rows, cols, 1.0);
  for (const Cell& c : held_out.cells) {
    if (c.row >= rows || c.col >= cols) {
      fail(ErrorCode::kInvalidArgument,
           "build_indicator: held-out cell (" + std::to_string(c.row) + ", " +
               std::to_string(c.col) + ") outside " + std::to_string(rows) +
               "x" + std::to_string(cols));
    }
    w(c.row, c.col) = 0.0;
  }
  return w;
}

DenseMatrix build_attenuation(const SparseBinaryMatrix& x_train) {
  const std::size_t m = x_train.cols();
  DenseMatrix g(x_train.rows(), m);
  for (std::size_t i = 0; i < x_train.rows(); ++i) {
    auto r = x_train.row_entries(i);
    if (r.empty()) continue;
    const std::size_t first = r.front().col;
    g(i, first) = 1.0;
    for (std::size_t k = first + 1; k < m; ++k) {
      g(i, k) = 1.0 - 1.0 / static_cast<double>(m - k);
    }
  }
  return g;
}

MaskPair build_masks(const SparseBinaryMatrix& x_train,
                     const HeldOutSet& held_out) {
  return {build_indicator(x_train.rows(), x_train.cols(), held_out),
          build_attenuation(x_train)};
}

}  // namespace hcwmf::masks
