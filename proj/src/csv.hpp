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

// Minimal comma-separated reader shared by the file loaders. No quoting:
// none of the accepted formats carries free text.

#ifndef EVCHARGE_SRC_CSV_HPP
#define EVCHARGE_SRC_CSV_HPP

#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <vector>

#include "evcharge/common.hpp"

namespace evcharge::csv {

struct Row {
  int line = 0;
  std::vector<std::string> cells;
};

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

/// Non-blank, non-comment ('#') rows with trimmed cells.
inline std::vector<Row> read_rows(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line = line.substr(3);
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    Row row{number, {}};
    std::size_t start = 0;
    while (true) {
      auto comma = t.find(',', start);
      row.cells.push_back(trim(t.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double to_number(const std::string& cell, int line, const char* what) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw InputError("BadNumber", std::string(what) + " is not a number: '" + cell + "'", line);
  }
  return value;
}

inline void expect_columns(const Row& row, std::size_t count, const char* format) {
  if (row.cells.size() != count) {
    throw InputError("BadColumnCount",
                     "expected " + std::to_string(count) + " columns (" + format + "), got " +
                         std::to_string(row.cells.size()),
                     row.line);
  }
}

}  // namespace evcharge::csv

#endif  // EVCHARGE_SRC_CSV_HPP
