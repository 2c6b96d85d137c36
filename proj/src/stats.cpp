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

#include "hcwmf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "hcwmf/error.hpp"
#include "hcwmf/rng.hpp"

namespace hcwmf::stats {

namespace {

// hashtag -> use count, per user, users in sorted order.
using Usage = std::map<std::string, std::map<std::string, std::size_t>>;

Usage usage_of(const dataio::AdoptionRecords& records) {
  Usage usage;
  std::set<std::string> tags;
  for (const auto& e : records.events) {
    ++usage[e.user][e.hashtag];
    tags.insert(e.hashtag);
  }
  require(usage.size() >= 2,
          "consistency vectors need at least 2 users, got " +
              std::to_string(usage.size()));
  require(tags.size() >= 2,
          "consistency vectors need at least 2 hashtags, got " +
              std::to_string(tags.size()));
  return usage;
}

std::vector<double> overlaps(const Usage& usage, std::uint64_t seed) {
  std::vector<const std::map<std::string, std::size_t>*> users;
  users.reserve(usage.size());
  for (const auto& [name, tags] : usage) users.push_back(&tags);

  Rng rng(seed);
  const std::size_t n = users.size();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = rng.below(n - 1);
    if (r >= i) ++r;
    std::size_t shared = 0;
    for (const auto& [tag, count] : *users[i]) shared += users[r]->count(tag);
    out.push_back(static_cast<double>(shared));
  }
  return out;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kTol = 1e-12;
  constexpr int kMaxTerms = 300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kTol) break;
  }
  return h;
}

// I_x(a, b) given x and y = 1 - x separately, so callers that know 1 - x
// more precisely than the subtraction can pass it in.
double incomplete_beta_split(double a, double b, double x, double y) {
  require(a > 0.0 && b > 0.0, "incomplete_beta: a and b must be > 0");
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log(y) - log_beta(a, b));
  // The fraction converges fast only below the mean; use the symmetry
  // I_x(a, b) = 1 - I_y(b, a) above it.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

}  // namespace

ConsistencyVectors build_consistency_vectors(const dataio::AdoptionRecords& records,
                                             std::uint64_t seed) {
  const Usage usage = usage_of(records);
  ConsistencyVectors out;
  out.hc_u.reserve(usage.size());
  for (const auto& [user, tags] : usage) {
    std::size_t repeated = 0;
    for (const auto& [tag, count] : tags) repeated += count >= 2 ? 1 : 0;
    out.hc_u.push_back(static_cast<double>(repeated));
  }
  out.hc_r = overlaps(usage, seed);
  return out;
}

std::vector<double> partner_overlap(const dataio::AdoptionRecords& records,
                                    std::uint64_t seed) {
  return overlaps(usage_of(records), seed);
}

TTestResult welch_ttest_one_sided(std::span<const double> a,
                                  std::span<const double> b, double alpha) {
  require(a.size() >= 2 && b.size() >= 2,
          "welch_ttest: each sample needs at least 2 values");
  require(alpha > 0.0 && alpha < 1.0, "welch_ttest: alpha must lie in (0, 1)");
  const double ma = mean(a), mb = mean(b);
  const double se_a = sample_variance(a, ma) / static_cast<double>(a.size());
  const double se_b = sample_variance(b, mb) / static_cast<double>(b.size());
  const double se2 = se_a + se_b;
  if (!(se2 > 0.0)) {
    fail(ErrorCode::kInvalidArgument,
         "welch_ttest: both samples have zero variance; the statistic is undefined");
  }
  TTestResult r;
  r.alpha = alpha;
  r.t_stat = (ma - mb) / std::sqrt(se2);
  r.degrees_freedom =
      se2 * se2 / (se_a * se_a / static_cast<double>(a.size() - 1) +
                   se_b * se_b / static_cast<double>(b.size() - 1));
  r.p_value = student_t_upper_tail(r.t_stat, r.degrees_freedom);
  return r;
}

double incomplete_beta(double a, double b, double x) {
  require(x >= 0.0 && x <= 1.0, "incomplete_beta: x must lie in [0, 1]");
  return incomplete_beta_split(a, b, x, 1.0 - x);
}

double student_t_upper_tail(double t, double df) {
  require(std::isfinite(t), "student_t_upper_tail: t must be finite");
  require(df > 0.0, "student_t_upper_tail: df must be > 0");
  if (t == 0.0) return 0.5;
  // P(|T| > |t|) = I_x(df/2, 1/2) with x = df/(df+t^2). Both x and 1 - x
  // are formed from t^2/df so neither side cancels.
  const double ratio = t * t / df;
  const double x = 1.0 / (1.0 + ratio);
  const double y = ratio / (1.0 + ratio);
  const double half = 0.5 * incomplete_beta_split(df / 2.0, 0.5, x, y);
  return t > 0.0 ? half : 1.0 - half;
}

}  // namespace hcwmf::stats
