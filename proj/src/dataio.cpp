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

#include "hcwmf/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "hcwmf/error.hpp"
#include "hcwmf/rng.hpp"
#include "json.hpp"
#include "text.hpp"

namespace hcwmf::dataio {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

bool is_blank(std::string_view s) { return text::trim(s).empty(); }

}  // namespace

ParseResult parse_records(std::istream& in) {
  if (!in) fail(ErrorCode::kIo, "parse_records: unreadable stream");
  ParseResult result;
  std::string line;
  std::size_t lineno = 0;
  auto skip = [&](std::string reason) {
    ++result.skipped;
    result.warnings.push_back({lineno, std::move(reason)});
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      skip("not a JSON object");
      continue;
    }
    auto user = obj.find("user");
    auto tag = obj.find("hashtag");
    auto ts = obj.find("ts");
    if (user == obj.end() || !user->is_string()) {
      skip("missing string field \"user\"");
      continue;
    }
    if (tag == obj.end() || !tag->is_string()) {
      skip("missing string field \"hashtag\"");
      continue;
    }
    if (ts == obj.end() || !ts->is_number_integer()) {
      skip("missing integer field \"ts\"");
      continue;
    }
    if (ts->is_number_unsigned() &&
        ts->get<std::uint64_t>() >
            static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      skip("\"ts\" out of range");
      continue;
    }
    const auto t = ts->get<std::int64_t>();
    if (t < 0) {
      skip("negative \"ts\"");
      continue;
    }
    result.records.events.push_back(
        {user->get<std::string>(), tag->get<std::string>(), t});
  }
  if (in.bad()) fail(ErrorCode::kIo, "parse_records: read error");
  return result;
}

ParseResult read_records_file(const std::string& path) {
  auto in = open_in(path);
  return parse_records(in);
}

void write_records(std::ostream& out, const AdoptionRecords& records) {
  for (const auto& e : records.events) {
    out << "{\"user\":" << json(e.user).dump()
        << ",\"hashtag\":" << json(e.hashtag).dump() << ",\"ts\":" << e.ts
        << "}\n";
  }
}

void write_records_file(const std::string& path, const AdoptionRecords& records) {
  auto out = open_out(path);
  write_records(out, records);
  finish_write(out, path);
}

std::size_t default_columns(std::size_t max_bin) {
  const std::size_t occupied = max_bin + 1;
  return occupied + (occupied + 3) / 4;
}

BinnedMatrix bin_records(const AdoptionRecords& records, std::string_view hashtag,
                         std::int64_t bin_seconds, std::size_t columns) {
  require(bin_seconds > 0, "bin_records: bin_seconds must be > 0");
  BinnedMatrix out;
  if (records.events.empty()) {
    out.x = SparseBinaryMatrix(0, std::max<std::size_t>(columns, 1), {});
    return out;
  }
  std::int64_t origin = std::numeric_limits<std::int64_t>::max();
  for (const auto& e : records.events) origin = std::min(origin, e.ts);
  out.origin_ts = origin;

  std::set<std::pair<std::string, std::size_t>> hits;
  std::size_t max_bin = 0;
  for (const auto& e : records.events) {
    if (e.hashtag != hashtag) continue;
    const auto bin = static_cast<std::size_t>((e.ts - origin) / bin_seconds);
    max_bin = std::max(max_bin, bin);
    hits.emplace(e.user, bin);
  }
  std::map<std::string, std::size_t> row_of;
  for (const auto& [user, bin] : hits) row_of.emplace(user, 0);
  std::size_t r = 0;
  for (auto& [user, row] : row_of) {
    row = r++;
    out.users.push_back(user);
  }

  std::size_t m = columns;
  if (m == 0) {
    m = default_columns(max_bin);
  } else if (!hits.empty() && m <= max_bin) {
    fail(ErrorCode::kInvalidArgument,
         "bin_records: " + std::to_string(m) + " columns cannot hold bin " +
             std::to_string(max_bin) + "; need at least " +
             std::to_string(max_bin + 1));
  }
  std::vector<linalg::Cell> cells;
  cells.reserve(hits.size());
  for (const auto& [user, bin] : hits) cells.push_back({row_of.at(user), bin});
  out.x = SparseBinaryMatrix(row_of.size(), m, std::move(cells));
  return out;
}

void SynthConfig::validate() const {
  require(n_users >= 1, "SynthConfig: n_users must be >= 1");
  require(n_bins >= 2, "SynthConfig: n_bins must be >= 2");
  require(trend_decay > 0.0 && std::isfinite(trend_decay),
          "SynthConfig: trend_decay must be > 0");
  require(repeat_prob >= 0.0 && repeat_prob <= 1.0,
          "SynthConfig: repeat_prob must lie in [0, 1]");
  require(repeat_decay >= 0.0 && std::isfinite(repeat_decay),
          "SynthConfig: repeat_decay must be >= 0");
  require(burst_period >= 1, "SynthConfig: burst_period must be >= 1");
  require(participation >= 0.0 && participation <= 1.0,
          "SynthConfig: participation must lie in [0, 1]");
  require(bin_seconds > 0, "SynthConfig: bin_seconds must be > 0");
  require(start_ts >= 0, "SynthConfig: start_ts must be >= 0");
}

std::string synthetic_user_id(std::size_t i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 7) digits.insert(0, 7 - digits.size(), '0');
  return "u" + digits;
}

AdoptionRecords generate_synthetic(const SynthConfig& cfg,
                                   std::span<const double> propensity) {
  cfg.validate();
  require(propensity.empty() || propensity.size() == cfg.n_users,
          "generate_synthetic: propensity needs one value per user");
  for (double p : propensity)
    require(p >= 0.0 && p <= 1.0, "generate_synthetic: propensity outside [0, 1]");

  const std::size_t slots = (cfg.n_bins + cfg.burst_period - 1) / cfg.burst_period;
  const double q = std::exp(-cfg.trend_decay);
  // Truncated geometric inverse CDF over burst slots.
  const double mass = 1.0 - std::pow(q, static_cast<double>(slots));

  AdoptionRecords out;
  for (std::size_t i = 0; i < cfg.n_users; ++i) {
    Rng rng(derive_seed(cfg.seed, {i}));
    const bool joins = rng.uniform() < cfg.participation;
    const double u = rng.uniform();
    if (!joins) continue;
    auto onset = static_cast<std::size_t>(std::floor(std::log1p(-u * mass) / std::log(q)));
    onset = std::min(onset, slots - 1);

    const std::string user = synthetic_user_id(i);
    const double scale = cfg.repeat_prob * (propensity.empty() ? 1.0 : propensity[i]);
    auto emit = [&](std::size_t slot) {
      const auto bin = static_cast<std::int64_t>(slot * cfg.burst_period);
      out.events.push_back({user, cfg.hashtag, cfg.start_ts + bin * cfg.bin_seconds});
    };
    emit(onset);
    for (std::size_t s = onset + 1; s < slots; ++s) {
      const double elapsed = static_cast<double>((s - onset) * cfg.burst_period);
      const double p = scale * std::exp(-cfg.repeat_decay * (elapsed - 1.0));
      if (rng.uniform() < p) emit(s);
    }
  }
  return out;
}

std::vector<double> draw_propensities(std::size_t n_users, double lo, double hi,
                                      std::uint64_t seed) {
  require(lo >= 0.0 && hi <= 1.0 && lo <= hi,
          "draw_propensities: need 0 <= lo <= hi <= 1");
  Rng rng(seed);
  std::vector<double> out(n_users);
  for (double& p : out) p = rng.uniform(lo, hi);
  return out;
}

AdoptionRecords generate_corpus(const CorpusConfig& cfg) {
  require(!cfg.hashtags.empty(), "generate_corpus: no hashtags");
  const auto propensity =
      draw_propensities(cfg.base.n_users, cfg.propensity_lo, cfg.propensity_hi,
                        derive_seed(cfg.base.seed, {0x70726f70}));
  AdoptionRecords out;
  for (std::size_t h = 0; h < cfg.hashtags.size(); ++h) {
    SynthConfig one = cfg.base;
    one.hashtag = cfg.hashtags[h];
    one.seed = derive_seed(cfg.base.seed, {h + 1});
    auto part = generate_synthetic(one, propensity);
    out.events.insert(out.events.end(),
                      std::make_move_iterator(part.events.begin()),
                      std::make_move_iterator(part.events.end()));
  }
  return out;
}

std::vector<CumulativePoint> cumulative_counts(const AdoptionRecords& records,
                                               std::int64_t bin_seconds) {
  require(bin_seconds > 0, "cumulative_counts: bin_seconds must be > 0");
  require(!records.events.empty(), "cumulative_counts: no records");
  std::int64_t origin = std::numeric_limits<std::int64_t>::max();
  for (const auto& e : records.events) origin = std::min(origin, e.ts);

  std::map<std::string, std::size_t> first_bin;
  std::map<std::size_t, std::size_t> events_in_bin;
  std::size_t max_bin = 0;
  for (const auto& e : records.events) {
    const auto bin = static_cast<std::size_t>((e.ts - origin) / bin_seconds);
    max_bin = std::max(max_bin, bin);
    ++events_in_bin[bin];
    auto [it, inserted] = first_bin.emplace(e.user, bin);
    if (!inserted) it->second = std::min(it->second, bin);
  }
  std::vector<std::size_t> new_users(max_bin + 1, 0);
  for (const auto& [user, bin] : first_bin) ++new_users[bin];

  std::vector<CumulativePoint> out;
  out.reserve(max_bin + 1);
  std::size_t events = 0, users = 0;
  for (std::size_t b = 0; b <= max_bin; ++b) {
    auto it = events_in_bin.find(b);
    if (it != events_in_bin.end()) events += it->second;
    users += new_users[b];
    out.push_back({b, events, users});
  }
  return out;
}

void write_cumulative_csv(std::ostream& out,
                          std::span<const CumulativePoint> points) {
  out << "bin,tweets,users\n";
  for (const auto& p : points) out << p.bin << ',' << p.events << ',' << p.users << '\n';
}

void write_matrix_csv(std::ostream& out, const SparseBinaryMatrix& x) {
  out << "N," << x.rows() << "\nM," << x.cols() << '\n';
  for (const auto& c : x.entries()) out << c.row << ',' << c.col << ",1\n";
}

SparseBinaryMatrix read_matrix_csv(std::istream& in) {
  if (!in) fail(ErrorCode::kIo, "read_matrix_csv: unreadable stream");
  std::string line;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& why) -> void {
    fail(ErrorCode::kParse,
         "matrix CSV line " + std::to_string(lineno) + ": " + why);
  };
  auto header = [&](char key) -> std::size_t {
    ++lineno;
    if (!std::getline(in, line)) bad(std::string("missing ") + key + " header");
    std::string_view s = text::trim(line);
    if (s.size() < 3 || s[0] != key || s[1] != ',') bad(std::string("expected '") + key + ",<count>'");
    auto v = text::parse_number<std::size_t>(s.substr(2));
    if (!v) bad("bad count");
    return *v;
  };
  const std::size_t n = header('N');
  const std::size_t m = header('M');

  std::vector<linalg::Cell> cells;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = text::trim(line);
    if (s.empty()) continue;
    const auto c1 = s.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
    if (c2 == std::string_view::npos) bad("expected row,col,1");
    auto row = text::parse_number<std::size_t>(s.substr(0, c1));
    auto col = text::parse_number<std::size_t>(s.substr(c1 + 1, c2 - c1 - 1));
    auto val = text::parse_number<int>(s.substr(c2 + 1));
    if (!row || !col || !val) bad("non-numeric field");
    if (*val != 1) bad("value must be 1");
    if (*row >= n || *col >= m)
      bad("cell (" + std::to_string(*row) + "," + std::to_string(*col) + ") outside " +
          std::to_string(n) + "x" + std::to_string(m));
    cells.push_back({*row, *col});
  }
  try {
    return SparseBinaryMatrix(n, m, std::move(cells));
  } catch (const Error& e) {
    fail(ErrorCode::kParse, std::string("matrix CSV: ") + e.what());
  }
}

void write_matrix_file(const std::string& path, const SparseBinaryMatrix& x) {
  auto out = open_out(path);
  write_matrix_csv(out, x);
  finish_write(out, path);
}

SparseBinaryMatrix read_matrix_file(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_csv(in);
}

}  // namespace hcwmf::dataio
