/*
 * Copyright 2026 The lfhs Authors
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

/// @file csv.hpp
/// @brief Result rows in the fixed harness schema, one row per repetition.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "lfhs/harness/benchmark.hpp"

namespace lfhs::harness {

inline constexpr std::string_view kCsvHeader =
    "table,capacity_log2,load_factor,read_pct,threads,rep,duration_secs,total_ops,ops_per_usec";

struct csv_row {
  std::string table;
  unsigned capacity_log2 = 0;
  double load_factor = 0.0;
  unsigned read_pct = 0;
  unsigned threads = 0;
  unsigned rep = 0;
  double duration_secs = 0.0;
  std::uint64_t total_ops = 0;
  double ops_per_usec = 0.0;
};

inline std::vector<csv_row> to_rows(const bench_result& result) {
  std::vector<csv_row> rows;
  const auto& c = result.config;
  for (const auto& r : result.reps) {
    rows.push_back({std::string(to_string(c.table)), c.capacity_log2, c.load_factor, c.read_pct, c.threads, r.rep,
                    c.duration_secs, r.total_ops, r.ops_per_usec});
  }
  return rows;
}

inline void write_row(std::ostream& out, const csv_row& row) {
  out << row.table << ',' << row.capacity_log2 << ',' << row.load_factor << ',' << row.read_pct << ','
      << row.threads << ',' << row.rep << ',' << row.duration_secs << ',' << row.total_ops << ','
      << std::setprecision(9) << row.ops_per_usec << std::setprecision(6) << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<bench_result>& results, bool header = true) {
  if (header) out << kCsvHeader << '\n';
  for (const auto& result : results) {
    for (const auto& row : to_rows(result)) write_row(out, row);
  }
}

/// Appends rows to `path`, writing the header only when the file is new or empty.
inline void emit_csv(const std::filesystem::path& path, const std::vector<bench_result>& results) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for append");
  write_csv(out, results, fresh);
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

/// Parses a harness CSV; throws std::runtime_error naming the bad line.
inline std::vector<csv_row> read_csv(std::istream& in) {
  std::vector<csv_row> rows;
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("line 1: unexpected header");
  for (std::size_t number = 2; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    csv_row row;
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw std::runtime_error("line " + std::to_string(number) + ": expected 9 fields");
    try {
      row.table = cells[0];
      row.capacity_log2 = static_cast<unsigned>(std::stoul(cells[1]));
      row.load_factor = std::stod(cells[2]);
      row.read_pct = static_cast<unsigned>(std::stoul(cells[3]));
      row.threads = static_cast<unsigned>(std::stoul(cells[4]));
      row.rep = static_cast<unsigned>(std::stoul(cells[5]));
      row.duration_secs = std::stod(cells[6]);
      row.total_ops = std::stoull(cells[7]);
      row.ops_per_usec = std::stod(cells[8]);
    } catch (const std::logic_error&) {
      throw std::runtime_error("line " + std::to_string(number) + ": malformed field");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<csv_row> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_csv(in);
}

}  // namespace lfhs::harness
