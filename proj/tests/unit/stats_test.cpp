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

#include "hcwmf/dataio.hpp"
#include "hcwmf/error.hpp"
#include "hcwmf/rng.hpp"
#include "hcwmf/stats.hpp"
#include "support/oracles.hpp"

using namespace hcwmf::stats;
using hcwmf::dataio::AdoptionRecords;

namespace {

AdoptionRecords uses(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  AdoptionRecords r;
  std::int64_t ts = 0;
  for (auto [u, h] : pairs) r.events.push_back({u, h, ts++});
  return r;
}

// Upper tail values computed with scipy.stats.t.sf and frozen here.
struct TailRef {
  double t, df, p;
};
constexpr TailRef kTailRefs[] = {
    {1.0, 8.0, 0.1732967535436671},
    {1.96, 1e6, 0.02499803379263489},
    {2.5, 3.7, 0.035911011455913376},
    {-0.7, 12.3, 0.7515229364708478},
    {10.0, 50.0, 8.038667344167695e-14},
    {0.3, 0.5, 0.4224295760652454},
};

// Far tails with many degrees of freedom, where 1 - I(...) would cancel.
constexpr TailRef kFarTailRefs[] = {
    {10.0, 800.0, 1.4491465191517695e-22},
    {10.0, 100000.0, 7.8165076501037e-24},
    {15.0, 800.0, 2.6487691655361665e-45},
    {21.13, 800.0, 2.155301551215963e-79},
    {30.0, 100000.0, 3.6892684361107536e-197},
    {5.0, 100000.0, 2.871350839320823e-07},
};

}  // namespace

TEST_CASE("t tail reference values") {
  CHECK(student_t_upper_tail(0.0, 3.0) == 0.5);
  CHECK(student_t_upper_tail(0.0, 1e9) == 0.5);
  for (const auto& r : kTailRefs) {
    CAPTURE(r.t);
    CAPTURE(r.df);
    CHECK(student_t_upper_tail(r.t, r.df) == doctest::Approx(r.p).epsilon(1e-9));
  }
  for (const auto& r : kFarTailRefs) {
    CAPTURE(r.t);
    CAPTURE(r.df);
    CHECK(student_t_upper_tail(r.t, r.df) == doctest::Approx(r.p).epsilon(1e-8));
    CHECK(student_t_upper_tail(-r.t, r.df) == 1.0 - student_t_upper_tail(r.t, r.df));
  }
  CHECK(std::abs(student_t_upper_tail(1.96, 1e6) - 0.025) < 1e-4);
  CHECK_THROWS_AS(student_t_upper_tail(1.0, 0.0), hcwmf::Error);
  CHECK_THROWS_AS(student_t_upper_tail(NAN, 3.0), hcwmf::Error);
}

TEST_CASE("t tail agrees with direct integration of the density") {
  hcwmf::Rng rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const double t = rng.uniform(-6, 6), df = rng.uniform(3, 60);
    CAPTURE(t);
    CAPTURE(df);
    CHECK(std::abs(student_t_upper_tail(t, df) - oracle::t_upper_tail_quadrature(t, df)) < 1e-9);
  }
}

TEST_CASE("t tail symmetry") {
  hcwmf::Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const double t = rng.uniform(-20, 20), df = std::exp(rng.uniform(-1, 12));
    CHECK(std::abs(student_t_upper_tail(t, df) + student_t_upper_tail(-t, df) - 1.0) < 1e-10);
    const double p = student_t_upper_tail(t, df);
    CHECK((p >= 0.0 && p <= 1.0));
  }
}

TEST_CASE("incomplete beta edge values") {
  CHECK(incomplete_beta(2, 3, 0) == 0);
  CHECK(incomplete_beta(2, 3, 1) == 1);
  // I_x(1, 1) = x and I_x(a, 1) = x^a
  CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(incomplete_beta(2.5, 1, 0.4) == doctest::Approx(std::pow(0.4, 2.5)).epsilon(1e-12));
  CHECK(incomplete_beta(3, 4, 0.2) + incomplete_beta(4, 3, 0.8) == doctest::Approx(1.0));
}

TEST_CASE("welch test worked examples") {
  std::vector<double> a{1, 2, 3, 4, 5}, b{0, 1, 2, 3, 4};
  auto r = welch_ttest_one_sided(a, b);
  CHECK(r.t_stat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.degrees_freedom == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(0.17329675354366708).epsilon(1e-9));
  CHECK_FALSE(r.reject());

  r = welch_ttest_one_sided(a, a);
  CHECK(r.t_stat == 0.0);
  CHECK(r.p_value == 0.5);

  // unequal sizes and variances, reference from scipy.stats.ttest_ind(equal_var=False)
  std::vector<double> c{2, 4, 4, 5, 7, 9, 3}, d{1, 1, 2, 3, 2};
  r = welch_ttest_one_sided(c, d, 0.01);
  CHECK(r.t_stat == doctest::Approx(3.1041671275719738).epsilon(1e-10));
  CHECK(r.degrees_freedom == doctest::Approx(7.859523447977172).epsilon(1e-10));
  CHECK(r.p_value == doctest::Approx(0.007447671324337203).epsilon(1e-8));
  CHECK(r.reject());
}

TEST_CASE("welch test matches the moment formulas") {
  hcwmf::Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(5 + rng.below(40)), b(5 + rng.below(40));
    for (double& v : a) v = rng.uniform(0, 3);
    for (double& v : b) v = rng.uniform(0.5, 2);
    const double va = oracle::sample_var(a) / a.size(), vb = oracle::sample_var(b) / b.size();
    const double t = (oracle::mean(a) - oracle::mean(b)) / std::sqrt(va + vb);
    const double df = (va + vb) * (va + vb) /
                      (va * va / (a.size() - 1) + vb * vb / (b.size() - 1));
    auto r = welch_ttest_one_sided(a, b);
    CHECK(r.t_stat == doctest::Approx(t).epsilon(1e-12));
    CHECK(r.degrees_freedom == doctest::Approx(df).epsilon(1e-12));
    CHECK(std::abs(r.p_value - oracle::t_upper_tail_quadrature(t, df)) < 1e-8);
  }
}

TEST_CASE("welch test invariances") {
  hcwmf::Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(3 + rng.below(30)), b(3 + rng.below(30));
    for (double& v : a) v = rng.uniform(-1, 4);
    for (double& v : b) v = rng.uniform(-2, 3);
    auto r = welch_ttest_one_sided(a, b);
    CHECK(r.degrees_freedom > 0);

    const double k = rng.uniform(0.1, 50);
    auto as = a, bs = b;
    for (double& v : as) v *= k;
    for (double& v : bs) v *= k;
    auto scaled = welch_ttest_one_sided(as, bs);
    CHECK(std::abs(scaled.t_stat - r.t_stat) < 1e-10);
    CHECK(std::abs(scaled.degrees_freedom - r.degrees_freedom) < 1e-10 * r.degrees_freedom);
    CHECK(std::abs(scaled.p_value - r.p_value) < 1e-10);

    auto swapped = welch_ttest_one_sided(b, a);
    CHECK(std::abs(swapped.t_stat + r.t_stat) < 1e-10);
    CHECK(std::abs(swapped.p_value - (1.0 - r.p_value)) < 1e-10);
  }
}

TEST_CASE("welch test input checks") {
  std::vector<double> one{1}, two{1, 2}, flat{3, 3, 3};
  CHECK_THROWS_AS(welch_ttest_one_sided(one, two), hcwmf::Error);
  CHECK_THROWS_AS(welch_ttest_one_sided(flat, flat), hcwmf::Error);
  CHECK_THROWS_AS(welch_ttest_one_sided(two, two, 0.0), hcwmf::Error);
}

TEST_CASE("consistency vectors") {
  // user a repeats A only; b and c never repeat
  auto rec = uses({{"a", "A"}, {"a", "A"}, {"a", "A"}, {"a", "B"}, {"b", "B"}, {"b", "C"},
                   {"c", "D"}});
  auto v = build_consistency_vectors(rec, 1);
  REQUIRE(v.hc_u.size() == 3);
  REQUIRE(v.hc_r.size() == 3);
  CHECK(v.hc_u == std::vector<double>{1, 0, 0});
  for (double x : v.hc_r) CHECK(x >= 0);

  // with two users the partner is forced: {A,B} vs {B,C} share one hashtag
  auto pair = uses({{"u", "A"}, {"u", "B"}, {"r", "B"}, {"r", "C"}});
  v = build_consistency_vectors(pair, 99);
  CHECK(v.hc_u == std::vector<double>{0, 0});
  CHECK(v.hc_r == std::vector<double>{1, 1});

  CHECK(partner_overlap(rec, 4) == partner_overlap(rec, 4));
  CHECK_THROWS_AS(build_consistency_vectors(uses({{"a", "A"}, {"a", "B"}}), 1), hcwmf::Error);
  CHECK_THROWS_AS(build_consistency_vectors(uses({{"a", "A"}, {"b", "A"}}), 1), hcwmf::Error);
}

TEST_CASE("a consistent synthetic corpus rejects the null") {
  hcwmf::dataio::CorpusConfig cc;
  cc.base.n_users = 300;
  cc.base.repeat_prob = 0.7;
  cc.base.participation = 0.4;
  cc.base.seed = 8;
  cc.hashtags = {"#a", "#b", "#c", "#d", "#e", "#f"};
  auto rec = hcwmf::dataio::generate_corpus(cc);
  auto v = build_consistency_vectors(rec, 3);
  auto r = welch_ttest_one_sided(v.hc_u, v.hc_r, 0.01);
  CHECK(r.p_value < 0.01);
  CHECK(r.reject());
}
