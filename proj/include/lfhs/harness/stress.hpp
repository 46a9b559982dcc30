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

/// @file stress.hpp
/// @brief Recorded multi-threaded random workload followed by quiescent audits.

#pragma once

#include <barrier>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <thread>
#include <vector>

#include "lfhs/checker/history.hpp"
#include "lfhs/checker/ledger_audit.hpp"
#include "lfhs/checker/structural_audit.hpp"
#include "lfhs/harness/benchmark.hpp"

namespace lfhs::harness {

struct stress_config {
  table_kind table = table_kind::hs_lockfree;
  unsigned capacity_log2 = 10;
  unsigned threads = 4;
  /// Total operations across all threads.
  std::uint64_t total_ops = 1'000'000;
  /// Keys drawn uniformly from [1, keyspace].
  std::uint64_t keyspace = 256;
  unsigned update_pct = 50;
  std::uint64_t seed = 1;
};

struct stress_result {
  std::size_t operations = 0;
  std::size_t final_members = 0;
  checker::ledger_report ledger;
  checker::audit_report audit;
  bool ok() const noexcept { return ledger.ok() && audit.clean(); }
};

template <class Table>
stress_result run_stress_on(Table& table, const stress_config& cfg) {
  const unsigned n = cfg.threads;
  const std::uint64_t per_thread = cfg.total_ops / n;
  checker::history_recorder recorder(n, per_thread);
  std::barrier start(static_cast<std::ptrdiff_t>(n));
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < n; ++t) {
    workers.emplace_back([&, t] {
      splitmix64 rng(stream_seed(cfg.seed, 0, t));
      bool next_is_add = true;
      start.arrive_and_wait();
      for (std::uint64_t i = 0; i < per_thread; ++i) {
        const key_type key = 1 + rng.below(cfg.keyspace);
        op_kind op = op_kind::contains;
        if (rng.below(100) < cfg.update_pct) {
          op = next_is_add ? op_kind::add : op_kind::remove;
          next_is_add = !next_is_add;
        }
        recorder.record(t, table, op, key);
      }
    });
  }
  for (auto& w : workers) w.join();

  stress_result out;
  const auto h = recorder.merge();
  const auto members = table.members();
  out.operations = h.size();
  out.final_members = members.size();
  out.ledger = checker::ledger_audit(h, members);
  out.audit = checker::structural_audit(table);
  return out;
}

inline stress_result run_stress(const stress_config& cfg) {
  if (cfg.threads == 0 || cfg.keyspace == 0) throw std::invalid_argument("stress: threads and keyspace must be >= 1");
  const auto tc = table_config::for_capacity(std::size_t{1} << cfg.capacity_log2, cfg.seed);
  if (cfg.table == table_kind::hs_lockfree) {
    lockfree_hopscotch_set table(tc);
    return run_stress_on(table, cfg);
  }
  locked_hopscotch_set table(tc, cfg.threads);
  return run_stress_on(table, cfg);
}

}  // namespace lfhs::harness
