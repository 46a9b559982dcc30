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

/// @file workload.hpp
/// @brief Benchmark scenario description and per-thread random streams.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lfhs/hash.hpp"

namespace lfhs::harness {

enum class table_kind { hs_lockfree, hs_locked };

constexpr std::string_view to_string(table_kind kind) noexcept {
  return kind == table_kind::hs_lockfree ? "hs-lockfree" : "hs-locked";
}

inline table_kind parse_table_kind(std::string_view name) {
  if (name == "hs-lockfree") return table_kind::hs_lockfree;
  if (name == "hs-locked") return table_kind::hs_locked;
  throw std::invalid_argument("unknown table kind: " + std::string(name));
}

struct workload_config {
  table_kind table = table_kind::hs_lockfree;
  unsigned capacity_log2 = 20;
  double load_factor = 0.6;
  /// Percentage of contains(); the rest are updates split evenly between add and remove.
  unsigned read_pct = 90;
  unsigned threads = 1;
  double duration_secs = 2.0;
  unsigned reps = 3;
  std::uint64_t seed = 1;
  /// Pin worker i to CPU i (mod available CPUs).
  bool pin_threads = true;

  std::size_t capacity() const noexcept { return std::size_t{1} << capacity_log2; }
  unsigned update_pct() const noexcept { return 100 - read_pct; }
  /// Uniform key space [1, keyrange]; twice the target occupancy.
  std::uint64_t keyrange() const noexcept {
    return static_cast<std::uint64_t>(std::llround(static_cast<double>(capacity()) * load_factor * 2.0));
  }
  std::size_t target_occupancy() const noexcept {
    return static_cast<std::size_t>(std::llround(static_cast<double>(capacity()) * load_factor));
  }

  void validate() const {
    if (capacity_log2 < 4 || capacity_log2 > 30) throw std::invalid_argument("capacity-log2 must be in [4, 30]");
    if (!(load_factor > 0.0 && load_factor < 1.0)) throw std::invalid_argument("load-factor must be in (0, 1)");
    if (read_pct > 100) throw std::invalid_argument("read-pct must be in [0, 100]");
    if (threads == 0) throw std::invalid_argument("threads must be >= 1");
    if (!(duration_secs > 0.0)) throw std::invalid_argument("duration-secs must be > 0");
    if (reps == 0) throw std::invalid_argument("reps must be >= 1");
  }
};

/// splitmix64 generator; satisfies UniformRandomBitGenerator.
class splitmix64 {
 public:
  using result_type = std::uint64_t;
  explicit constexpr splitmix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound) by multiply-high reduction.
  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Independent stream for (seed, repetition, thread).
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t rep, std::uint64_t thread) noexcept {
  return fmix64(seed ^ fmix64((rep << 32) ^ (thread + 1)));
}

}  // namespace lfhs::harness
