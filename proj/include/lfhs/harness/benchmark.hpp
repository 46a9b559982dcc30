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

/// @file benchmark.hpp
/// @brief Prefill-then-timed-run throughput measurement.
///
/// Every repetition builds a fresh table, prefills it to the target load
/// factor, releases all workers through one barrier and lets them run mixed
/// operations until the deadline. Throughput is completed operations per
/// microsecond summed over workers.

#pragma once

#include <pthread.h>
#include <sched.h>

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "lfhs/harness/workload.hpp"
#include "lfhs/locked_hopscotch_set.hpp"
#include "lfhs/lockfree_hopscotch_set.hpp"

namespace lfhs::harness {

using bench_clock = std::chrono::steady_clock;

struct rep_result {
  unsigned rep = 0;
  std::vector<std::uint64_t> per_thread_ops;
  std::uint64_t total_ops = 0;
  double elapsed_secs = 0.0;
  double ops_per_usec = 0.0;
  /// Member count / capacity after the run.
  double measured_load = 0.0;
  /// Start-barrier release and each worker's first operation (debug stamps).
  bench_clock::time_point released;
  std::vector<bench_clock::time_point> first_op;
};

struct bench_result {
  workload_config config;
  std::vector<rep_result> reps;
  double mean_ops_per_usec = 0.0;
  std::vector<std::string> warnings;
};

/// Pins the calling thread to one CPU of its allowed set. Returns false on failure.
inline bool pin_current_thread(unsigned worker) {
  cpu_set_t allowed;
  CPU_ZERO(&allowed);
  if (sched_getaffinity(0, sizeof(allowed), &allowed) != 0) return false;
  const int available = CPU_COUNT(&allowed);
  if (available <= 0) return false;
  int target = static_cast<int>(worker % static_cast<unsigned>(available));
  for (int cpu = 0; cpu < CPU_SETSIZE; ++cpu) {
    if (!CPU_ISSET(cpu, &allowed)) continue;
    if (target-- == 0) {
      cpu_set_t one;
      CPU_ZERO(&one);
      CPU_SET(cpu, &one);
      return pthread_setaffinity_np(pthread_self(), sizeof(one), &one) == 0;
    }
  }
  return false;
}

template <class Table>
std::unique_ptr<Table> make_table(const workload_config& cfg);

template <>
inline std::unique_ptr<lockfree_hopscotch_set> make_table<lockfree_hopscotch_set>(const workload_config& cfg) {
  return std::make_unique<lockfree_hopscotch_set>(table_config::for_capacity(cfg.capacity(), cfg.seed));
}

template <>
inline std::unique_ptr<locked_hopscotch_set> make_table<locked_hopscotch_set>(const workload_config& cfg) {
  return std::make_unique<locked_hopscotch_set>(table_config::for_capacity(cfg.capacity(), cfg.seed), cfg.threads);
}

/// Inserts round(capacity * load_factor) distinct keys drawn uniformly from
/// [1, keyrange]. Deterministic for a given seed. table_saturated propagates.
template <class Table>
std::vector<key_type> prefill(Table& table, const workload_config& cfg) {
  const std::uint64_t range = cfg.keyrange();
  const std::size_t count = cfg.target_occupancy();
  std::vector<key_type> pool(range);
  std::iota(pool.begin(), pool.end(), key_type{1});
  splitmix64 rng(stream_seed(cfg.seed, ~std::uint64_t{0}, 0));
  // Partial Fisher-Yates: the first `count` slots become the sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(range - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  for (const auto key : pool) table.add(key);
  return pool;
}

template <class Table>
rep_result run_repetition(const workload_config& cfg, unsigned rep, std::vector<std::string>& warnings) {
  auto table = make_table<Table>(cfg);
  prefill(*table, cfg);

  const unsigned n = cfg.threads;
  const std::uint64_t range = cfg.keyrange();
  rep_result out;
  out.rep = rep;
  out.per_thread_ops.assign(n, 0);
  out.first_op.assign(n, {});

  std::atomic<bool> stop{false};
  std::atomic<unsigned> pin_failures{0};
  bench_clock::time_point released;
  std::barrier start(static_cast<std::ptrdiff_t>(n) + 1, [&released]() noexcept { released = bench_clock::now(); });

  std::vector<std::thread> workers;
  workers.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    workers.emplace_back([&, t] {
      if (cfg.pin_threads && !pin_current_thread(t)) pin_failures.fetch_add(1);
      splitmix64 rng(stream_seed(cfg.seed, rep, t));
      bool next_is_add = true;
      std::uint64_t ops = 0;
      start.arrive_and_wait();
      out.first_op[t] = bench_clock::now();
      while (!stop.load(std::memory_order_relaxed)) {
        const key_type key = 1 + rng.below(range);
        if (rng.below(100) < cfg.read_pct) {
          static_cast<void>(table->contains(key));
        } else {
          static_cast<void>(next_is_add ? table->add(key) : table->remove(key));
          next_is_add = !next_is_add;
        }
        ++ops;
      }
      out.per_thread_ops[t] = ops;
    });
  }

  start.arrive_and_wait();
  std::this_thread::sleep_for(std::chrono::duration<double>(cfg.duration_secs));
  stop.store(true);
  const auto stopped = bench_clock::now();
  for (auto& w : workers) w.join();

  if (pin_failures.load() != 0) {
    warnings.push_back("rep " + std::to_string(rep) + ": could not pin " + std::to_string(pin_failures.load()) +
                       " worker(s)");
  }
  out.released = released;
  out.elapsed_secs = std::chrono::duration<double>(stopped - released).count();
  out.total_ops = std::accumulate(out.per_thread_ops.begin(), out.per_thread_ops.end(), std::uint64_t{0});
  out.ops_per_usec = static_cast<double>(out.total_ops) / (out.elapsed_secs * 1e6);
  out.measured_load = static_cast<double>(table->count_members()) / static_cast<double>(table->capacity());
  return out;
}

template <class Table>
bench_result run_benchmark_on(const workload_config& cfg) {
  cfg.validate();
  bench_result result;
  result.config = cfg;
  for (unsigned rep = 0; rep < cfg.reps; ++rep) {
    result.reps.push_back(run_repetition<Table>(cfg, rep, result.warnings));
  }
  double sum = 0.0;
  for (const auto& r : result.reps) sum += r.ops_per_usec;
  result.mean_ops_per_usec = sum / static_cast<double>(result.reps.size());
  return result;
}

inline bench_result run_benchmark(const workload_config& cfg) {
  switch (cfg.table) {
    case table_kind::hs_lockfree:
      return run_benchmark_on<lockfree_hopscotch_set>(cfg);
    case table_kind::hs_locked:
      return run_benchmark_on<locked_hopscotch_set>(cfg);
  }
  throw std::invalid_argument("unknown table kind");
}

}  // namespace lfhs::harness
