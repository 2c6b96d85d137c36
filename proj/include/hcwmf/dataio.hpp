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

#ifndef HCWMF_DATAIO_HPP_
#define HCWMF_DATAIO_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcwmf/linalg.hpp"

namespace hcwmf::dataio {

using linalg::SparseBinaryMatrix;

struct AdoptionEvent {
  std::string user;
  std::string hashtag;
  std::int64_t ts = 0;  // seconds since epoch

  friend bool operator==(const AdoptionEvent&, const AdoptionEvent&) = default;
};

struct AdoptionRecords {
  std::vector<AdoptionEvent> events;
};

struct ParseWarning {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct ParseResult {
  AdoptionRecords records;
  std::size_t skipped = 0;
  std::vector<ParseWarning> warnings;  // one per skipped line
};

// Newline-delimited JSON, one {"user": str, "hashtag": str, "ts": int >= 0}
// object per line. Blank lines are ignored; any other malformed line is
// skipped and reported.
ParseResult parse_records(std::istream& in);
ParseResult read_records_file(const std::string& path);

void write_records(std::ostream& out, const AdoptionRecords& records);
void write_records_file(const std::string& path, const AdoptionRecords& records);

struct BinnedMatrix {
  SparseBinaryMatrix x;
  std::vector<std::string> users;  // row labels, sorted
  std::int64_t origin_ts = 0;
};

// Columns used when the caller does not fix M: occupied bins plus 25%.
std::size_t default_columns(std::size_t max_bin);

// One row per distinct user of `hashtag`, column floor((ts - origin) / bin)
// with origin the minimum timestamp over all records. `columns` = 0 selects
// default_columns(); otherwise it must exceed the largest occupied bin.
BinnedMatrix bin_records(const AdoptionRecords& records, std::string_view hashtag,
                         std::int64_t bin_seconds, std::size_t columns = 0);

struct SynthConfig {
  std::size_t n_users = 500;
  std::size_t n_bins = 168;
  // Onset burst n is drawn with probability proportional to exp(-trend_decay n).
  double trend_decay = 4.0;
  // Per-burst re-adoption probability once a user has adopted.
  double repeat_prob = 0.5;
  // Re-adoption probability is scaled by exp(-repeat_decay (k - 1)) where k
  // is the number of bins since onset.
  double repeat_decay = 0.0;
  // Adoptions only happen in bins that are multiples of this period (24 is
  // one daily burst in hourly bins); 1 makes every bin eligible.
  std::size_t burst_period = 24;
  // Probability that a given user adopts the hashtag at all.
  double participation = 1.0;
  std::string hashtag = "#synthetic";
  std::int64_t start_ts = 1420070400;  // 2015-01-01T00:00:00Z
  std::int64_t bin_seconds = 3600;
  std::uint64_t seed = 1;

  void validate() const;
};

// Synthetic user id for index i; ids sort in index order.
std::string synthetic_user_id(std::size_t i);

// One hashtag. `propensity`, when given, holds one factor in [0, 1] per user
// that scales every re-adoption probability.
AdoptionRecords generate_synthetic(const SynthConfig& cfg,
                                   std::span<const double> propensity = {});

struct CorpusConfig {
  SynthConfig base;
  std::vector<std::string> hashtags;
  // Per-user consistency propensity ~ U(lo, hi), drawn once and shared by
  // every hashtag.
  double propensity_lo = 0.0;
  double propensity_hi = 1.0;
};

std::vector<double> draw_propensities(std::size_t n_users, double lo, double hi,
                                      std::uint64_t seed);

AdoptionRecords generate_corpus(const CorpusConfig& cfg);

struct CumulativePoint {
  std::size_t bin = 0;
  std::size_t events = 0;
  std::size_t users = 0;
};

// Running totals per bin from bin 0 through the last occupied bin.
std::vector<CumulativePoint> cumulative_counts(const AdoptionRecords& records,
                                               std::int64_t bin_seconds);
void write_cumulative_csv(std::ostream& out,
                          std::span<const CumulativePoint> points);

// Coordinate CSV: "N,<rows>" and "M,<cols>" header lines, then one
// "row,col,1" line per entry in row-major order.
void write_matrix_csv(std::ostream& out, const SparseBinaryMatrix& x);
SparseBinaryMatrix read_matrix_csv(std::istream& in);
void write_matrix_file(const std::string& path, const SparseBinaryMatrix& x);
SparseBinaryMatrix read_matrix_file(const std::string& path);

}  // namespace hcwmf::dataio

#endif  // HCWMF_DATAIO_HPP_
