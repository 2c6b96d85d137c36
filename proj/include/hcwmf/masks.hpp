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

#ifndef HCWMF_MASKS_HPP_
#define HCWMF_MASKS_HPP_

#include <cstddef>
#include <vector>

#include "hcwmf/linalg.hpp"

namespace hcwmf::masks {

using linalg::Cell;
using linalg::DenseMatrix;
using linalg::SparseBinaryMatrix;

// Positive cells removed from X for evaluation; sorted, unique.
struct HeldOutSet {
  std::vector<Cell> cells;
};

struct MaskPair {
  DenseMatrix w;  // indicator: 0 on held-out cells, 1 elsewhere
  DenseMatrix g;  // attenuation ramp anchored at each row's first positive
};

DenseMatrix build_indicator(std::size_t rows, std::size_t cols,
                            const HeldOutSet& held_out);

// Row i with first positive at 0-based column f gets
//   g(i, k) = 0                    for k < f
//   g(i, f) = 1
//   g(i, k) = 1 - 1 / (M - k)      for k > f  (1-based: 1 - 1/(M - k + 1))
// so the tail decreases strictly and reaches 0 at the last column. Later
// positives do not restart the ramp; rows without positives stay zero.
DenseMatrix build_attenuation(const SparseBinaryMatrix& x_train);

// W from the held-out set, G from the post-masking training matrix.
MaskPair build_masks(const SparseBinaryMatrix& x_train,
                     const HeldOutSet& held_out);

}  // namespace hcwmf::masks

#endif  // HCWMF_MASKS_HPP_
