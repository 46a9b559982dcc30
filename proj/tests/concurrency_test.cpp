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

#include <gtest/gtest.h>

#include <atomic>
#include <barrier>
#include <random>
#include <thread>
#include <vector>

#include "lfhs/harness/stress.hpp"
#include "lfhs/lockfree_hopscotch_set.hpp"
#include "micro_histories.hpp"

namespace {

using namespace lfhs;

std::string first_problem(const harness::stress_result& r) {
  if (!r.ledger.ok()) return r.ledger.violations.front();
  return r.audit.to_text();
}

class LockfreeStress : public ::testing::TestWithParam<unsigned> {};

TEST_P(LockfreeStress, LedgerAndStructureHold) {
  harness::stress_config cfg;
  cfg.threads = GetParam();
  cfg.total_ops = 200'000;
  cfg.seed = 17 + GetParam();
  const auto r = harness::run_stress(cfg);
  EXPECT_TRUE(r.ok()) << first_problem(r);
  EXPECT_EQ(r.operations, cfg.total_ops);
}

INSTANTIATE_TEST_SUITE_P(Threads, LockfreeStress, ::testing::Values(2u, 4u, 8u));

TEST(LockfreeStress, CrowdedTableWithoutPrescan) {
  table_config tc = table_config::for_capacity(256, 4);
  tc.neighborhood = 8;
  tc.max_distance = 64;
  tc.prescan = false;
  lockfree_hopscotch_set table(tc);
  harness::stress_config cfg;
  cfg.threads = 4;
  cfg.total_ops = 200'000;
  cfg.keyspace = 96;
  const auto r = harness::run_stress_on(table, cfg);
  EXPECT_TRUE(r.ok()) << first_problem(r);
}

TEST(MicroHistories, RandomSmallHistoriesAreLinearizable) {
  const auto r = lfhs::testing::run_micro_histories(1500, 2024);
  EXPECT_EQ(r.histories, 1500u);
  EXPECT_EQ(r.failures, 0u) << r.first_failure;
  EXPECT_GT(r.overlapping, 0u);
  RecordProperty("overlapping", static_cast<int>(r.overlapping));
}

TEST(Monotonicity, VersionsAndRelocationCountersNeverDecrease) {
  table_config tc = table_config::for_capacity(128, 9);
  tc.neighborhood = 8;
  tc.max_distance = 128;
  lockfree_hopscotch_set table(tc);
  std::atomic<bool> stop{false};
  std::atomic<std::uint64_t> regressions{0};
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      std::mt19937_64 rng(t);
      for (int i = 0; i < 60'000; ++i) {
        const key_type k = 1 + rng() % 90;
        if (rng() % 2) {
          table.add(k);
        } else {
          table.remove(k);
        }
      }
    });
  }
  std::thread watcher([&] {
    std::vector<std::uint64_t> versions(tc.capacity), relocations(tc.capacity);
    while (!stop.load()) {
      for (std::size_t b = 0; b < tc.capacity; ++b) {
        const auto v = table.inspect(b);
        if (v.vs.version < versions[b] || v.relocations < relocations[b]) regressions.fetch_add(1);
        versions[b] = v.vs.version;
        relocations[b] = v.relocations;
      }
    }
  });
  for (auto& t : threads) t.join();
  stop = true;
  watcher.join();
  EXPECT_EQ(regressions.load(), 0u);
  EXPECT_TRUE(checker::structural_audit(table).clean());
}

}  // namespace
