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

/// @file history.hpp
/// @brief Operation records and a low-overhead concurrent history recorder.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lfhs/operation.hpp"
#include "lfhs/table_config.hpp"

namespace lfhs::checker {

/// One completed operation. Stamps come from a single global counter, so
/// a.response < b.invoke means a finished before b started.
struct op_record {
  std::uint32_t thread = 0;
  op_kind op = op_kind::contains;
  key_type key = kNilKey;
  bool result = false;
  std::uint64_t invoke = 0;
  std::uint64_t response = 0;

  friend bool operator==(const op_record&, const op_record&) = default;
};

using history = std::vector<op_record>;

inline nlohmann::json to_json(const op_record& r) {
  return {{"thread", r.thread}, {"op", std::string(to_string(r.op))}, {"key", r.key},
          {"result", r.result}, {"invoke", r.invoke}, {"response", r.response}};
}

inline std::string to_text(const op_record& r) {
  std::ostringstream out;
  out << "t" << r.thread << " " << to_string(r.op) << "(" << r.key << ") -> " << (r.result ? "true" : "false")
      << " [" << r.invoke << ", " << r.response << "]";
  return out.str();
}

inline std::string to_text(const history& h) {
  std::string out;
  for (const auto& r : h) out += to_text(r) + "\n";
  return out;
}

inline std::string to_json_lines(const history& h) {
  std::string out;
  for (const auto& r : h) out += to_json(r).dump() + "\n";
  return out;
}

/// Throws std::invalid_argument unless every record has invoke < response
/// and each thread's records are disjoint in time.
inline void validate(const history& h) {
  std::vector<const op_record*> sorted;
  sorted.reserve(h.size());
  for (const auto& r : h) {
    if (r.invoke >= r.response) throw std::invalid_argument("history: invoke stamp not before response");
    sorted.push_back(&r);
  }
  std::sort(sorted.begin(), sorted.end(), [](const op_record* a, const op_record* b) {
    return a->thread != b->thread ? a->thread < b->thread : a->invoke < b->invoke;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->thread == sorted[i - 1]->thread && sorted[i]->invoke < sorted[i - 1]->response) {
      throw std::invalid_argument("history: overlapping operations on one thread");
    }
  }
}

/// Per-thread append-only buffers sharing one logical clock.
class history_recorder {
 public:
  explicit history_recorder(std::size_t threads, std::size_t reserve_per_thread = 0) : buffers_(threads) {
    for (auto& b : buffers_) b.records.reserve(reserve_per_thread);
  }

  template <class Set>
  bool record(std::uint32_t thread, Set& set, op_kind op, key_type key) {
    const std::uint64_t invoke = clock_.fetch_add(1);
    const bool result = apply(set, op, key);
    const std::uint64_t response = clock_.fetch_add(1);
    buffers_[thread].records.push_back({thread, op, key, result, invoke, response});
    return result;
  }

  /// All records ordered by invocation. Call only after the recording threads joined.
  history merge() const {
    history out;
    for (const auto& b : buffers_) out.insert(out.end(), b.records.begin(), b.records.end());
    std::sort(out.begin(), out.end(), [](const op_record& a, const op_record& b) { return a.invoke < b.invoke; });
    return out;
  }

 private:
  struct alignas(64) buffer {
    std::vector<op_record> records;
  };
  std::atomic<std::uint64_t> clock_{1};
  std::vector<buffer> buffers_;
};

}  // namespace lfhs::checker
