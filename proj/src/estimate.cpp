// Copyright 2026 The evcharge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evcharge/estimate.hpp"

#include <fstream>
#include <numeric>
#include <set>

#include "csv.hpp"

namespace evcharge::estimate {

int ODMatrix::index_of(const std::string& borough) const {
  auto it = std::find(boroughs.begin(), boroughs.end(), borough);
  return it == boroughs.end() ? -1 : static_cast<int>(it - boroughs.begin());
}

double mean_outlet_rate(std::span<const SessionRecord> sessions, const std::string& station_id) {
  double sum = 0.0;
  int count = 0;
  for (const auto& s : sessions) {
    if (s.station_id != station_id) continue;
    sum += s.kw_per_s;
    ++count;
  }
  if (count == 0) throw NoSessions("station " + station_id + " has no sessions");
  return sum / count;
}

double station_capacity_kw(std::span<const SessionRecord> sessions, const Station& station,
                           const Period& period) {
  return station.outlets * mean_outlet_rate(sessions, station.id) * period.duration_s;
}

double session_energy_in_window(const SessionRecord& session, double window_start_s, double window_duration_s,
                                double horizon_s) {
  if (window_duration_s <= 0.0 || session.duration_s <= 0.0) return 0.0;
  const double window_end = window_start_s + window_duration_s;
  // Walk the session in day-sized pieces so multi-day and wrapping sessions
  // are folded back onto [0, horizon).
  double start = std::fmod(session.start_s, horizon_s);
  if (start < 0.0) start += horizon_s;
  double remaining = session.duration_s;
  double overlap = 0.0;
  while (remaining > 0.0) {
    const double piece = std::min(remaining, horizon_s - start);
    const double lo = std::max(start, window_start_s);
    const double hi = std::min(start + piece, window_end);
    if (hi > lo) overlap += hi - lo;
    remaining -= piece;
    start = 0.0;
  }
  return overlap * session.kw_per_s;
}

std::map<std::string, double> borough_supply_kw(std::span<const SessionRecord> sessions,
                                                const std::map<std::string, std::string>& station_borough,
                                                const std::vector<std::string>& boroughs,
                                                double period_start_s, double period_duration_s) {
  std::map<std::string, double> supply;
  for (const auto& b : boroughs) supply[b] = 0.0;
  for (const auto& s : sessions) {
    auto it = station_borough.find(s.station_id);
    if (it == station_borough.end()) {
      throw InputError("UnknownStation", "station " + s.station_id + " has no borough assignment");
    }
    supply[it->second] += session_energy_in_window(s, period_start_s, period_duration_s);
  }
  return supply;
}

std::vector<double> energy_period_weights(std::span<const SessionRecord> sessions,
                                          const std::vector<Period>& periods) {
  std::vector<double> energy(periods.size(), 0.0);
  double horizon = 0.0;
  for (const auto& p : periods) horizon += p.duration_s;
  double start = 0.0;
  for (std::size_t t = 0; t < periods.size(); ++t) {
    for (const auto& s : sessions) energy[t] += session_energy_in_window(s, start, periods[t].duration_s, horizon);
    start += periods[t].duration_s;
  }
  const double total = std::accumulate(energy.begin(), energy.end(), 0.0);
  if (total <= 0.0) return std::vector<double>(periods.size(), 1.0 / static_cast<double>(periods.size()));
  for (auto& e : energy) e /= total;
  return energy;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("FileNotFound", "cannot open " + path);
  return in;
}

bool is_header(const csv::Row& row, const char* first) { return !row.cells.empty() && row.cells[0] == first; }

}  // namespace

std::vector<SessionRecord> parse_sessions_csv(std::istream& in) {
  std::vector<SessionRecord> out;
  for (const auto& row : csv::read_rows(in)) {
    if (is_header(row, "station_id")) continue;
    csv::expect_columns(row, 4, "station_id,start_s,duration_s,kw_per_s");
    SessionRecord s;
    s.station_id = row.cells[0];
    s.start_s = csv::to_number(row.cells[1], row.line, "start_s");
    s.duration_s = csv::to_number(row.cells[2], row.line, "duration_s");
    s.kw_per_s = csv::to_number(row.cells[3], row.line, "kw_per_s");
    if (s.station_id.empty()) throw InputError("BadSession", "empty station_id", row.line);
    if (s.start_s < 0.0 || s.start_s >= kDayHorizonSeconds) {
      throw InputError("BadSession", "start_s must be in [0, 86400)", row.line);
    }
    if (!(s.duration_s > 0.0)) throw InputError("BadSession", "duration_s must be positive", row.line);
    if (!(s.kw_per_s > 0.0)) throw InputError("BadSession", "kw_per_s must be positive", row.line);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SessionRecord> read_sessions_csv(const std::string& path) {
  auto in = open(path);
  return parse_sessions_csv(in);
}

ODMatrix parse_od_matrix_csv(std::istream& in) {
  auto rows = csv::read_rows(in);
  if (rows.empty()) throw InputError("EmptyMatrix", "OD matrix file is empty");
  const auto& header = rows.front();
  ODMatrix m;
  m.boroughs.assign(header.cells.begin() + 1, header.cells.end());
  const int n = m.size();
  if (n == 0) throw InputError("EmptyMatrix", "header names no boroughs", header.line);
  if (std::set<std::string>(m.boroughs.begin(), m.boroughs.end()).size() != m.boroughs.size()) {
    throw InputError("DuplicateBorough", "borough ids in the header must be unique", header.line);
  }
  if (static_cast<int>(rows.size()) - 1 != n) {
    throw InputError("NotSquare",
                     std::to_string(rows.size() - 1) + " data rows for " + std::to_string(n) + " boroughs");
  }
  m.p = Matrix<double>::Zero(n, n);
  std::vector<bool> seen(n, false);
  for (int r = 1; r <= n; ++r) {
    const auto& row = rows[r];
    if (static_cast<int>(row.cells.size()) != n + 1) {
      throw InputError("BadColumnCount", "expected " + std::to_string(n + 1) + " columns", row.line);
    }
    const int i = m.index_of(row.cells[0]);
    if (i < 0) throw InputError("UnknownBorough", "row borough '" + row.cells[0] + "' not in header", row.line);
    if (seen[i]) throw InputError("DuplicateBorough", "row for '" + row.cells[0] + "' repeated", row.line);
    seen[i] = true;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = csv::to_number(row.cells[j + 1], row.line, "share");
      if (v < 0.0 || v > 1.0) throw InputError("ShareOutOfRange", "share must be in [0, 1]", row.line);
      m.p(i, j) = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InputError("RowSumError", "row '" + row.cells[0] + "' sums to " + std::to_string(sum), row.line);
    }
  }
  return m;
}

ODMatrix read_od_matrix_csv(const std::string& path) {
  auto in = open(path);
  return parse_od_matrix_csv(in);
}

std::map<std::string, std::string> parse_borough_assignment_csv(std::istream& in) {
  std::map<std::string, std::string> out;
  for (const auto& row : csv::read_rows(in)) {
    if (is_header(row, "station_id")) continue;
    csv::expect_columns(row, 2, "station_id,borough_id");
    if (!out.emplace(row.cells[0], row.cells[1]).second) {
      throw InputError("DuplicateStation", "station " + row.cells[0] + " assigned twice", row.line);
    }
  }
  return out;
}

std::map<std::string, std::string> read_borough_assignment_csv(const std::string& path) {
  auto in = open(path);
  return parse_borough_assignment_csv(in);
}

}  // namespace evcharge::estimate
