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

#ifndef HCWMF_STATS_HPP_
#define HCWMF_STATS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "hcwmf/dataio.hpp"

namespace hcwmf::stats {

// Paired per-user counts: hc_u[i] is how many distinct hashtags user i used
// at least twice, hc_r[i] how many hashtags user i shares with a randomly
// chosen other user.
struct ConsistencyVectors {
  std::vector<double> hc_u;
  std::vector<double> hc_r;
};

struct TTestResult {
  double t_stat = 0.0;
  double degrees_freedom = 0.0;
  double p_value = 0.0;  // P(T > t), i.e. H1: mean(a) > mean(b)
  double alpha = 0.01;

  bool reject() const { return p_value < alpha; }
};

// One element per user with at least one record, users in sorted order.
// Partners are drawn uniformly among the other users from `seed`.
ConsistencyVectors build_consistency_vectors(const dataio::AdoptionRecords& records,
                                             std::uint64_t seed);

// hc_r computed on its own; a second draw with another seed is the
// same-statistic control for the t-test.
std::vector<double> partner_overlap(const dataio::AdoptionRecords& records,
                                    std::uint64_t seed);

TTestResult welch_ttest_one_sided(std::span<const double> a,
                                  std::span<const double> b,
                                  double alpha = 0.01);

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction
// (relative tolerance 1e-12, at most 300 terms).
double incomplete_beta(double a, double b, double x);

// P(T > t) for Student's t with `df` degrees of freedom.
double student_t_upper_tail(double t, double df);

}  // namespace hcwmf::stats

#endif  // HCWMF_STATS_HPP_
