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

#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "lfhs/harness/benchmark.hpp"
#include "lfhs/harness/csv.hpp"
#include "lfhs/harness/workload.hpp"

namespace {

using namespace lfhs;
using namespace lfhs::harness;

workload_config tiny(table_kind kind = table_kind::hs_lockfree) {
  workload_config cfg;
  cfg.table = kind;
  cfg.capacity_log2 = 10;
  cfg.load_factor = 0.6;
  cfg.read_pct = 90;
  cfg.threads = 1;
  cfg.duration_secs = 0.05;
  cfg.reps = 2;
  cfg.pin_threads = false;
  return cfg;
}

TEST(Workload, KeyrangeIsTwiceTargetOccupancy) {
  const auto cfg = tiny();
  EXPECT_EQ(cfg.target_occupancy(), 614u);
  EXPECT_EQ(cfg.keyrange(), 1229u);
  EXPECT_EQ(cfg.update_pct(), 10u);
}

TEST(Workload, ValidateRejectsOutOfRangeValues) {
  auto cfg = tiny();
  EXPECT_NO_THROW(cfg.validate());
  cfg.load_factor = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = tiny();
  cfg.read_pct = 101;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = tiny();
  cfg.threads = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = tiny();
  cfg.capacity_log2 = 2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = tiny();
  cfg.duration_secs = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = tiny();
  cfg.reps = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Workload, ParsesTableKinds) {
  EXPECT_EQ(parse_table_kind("hs-lockfree"), table_kind::hs_lockfree);
  EXPECT_EQ(parse_table_kind("hs-locked"), table_kind::hs_locked);
  EXPECT_THROW(parse_table_kind("chained"), std::invalid_argument);
  EXPECT_EQ(to_string(table_kind::hs_locked), "hs-locked");
}

TEST(Workload, SplitmixBelowStaysInRange) {
  splitmix64 rng(1);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.below(7), 7u);
  EXPECT_NE(stream_seed(1, 0, 0), stream_seed(1, 0, 1));
  EXPECT_NE(stream_seed(1, 0, 0), stream_seed(1, 1, 0));
}

TEST(Prefill, HitsTargetWithDistinctKeysInRange) {
  const auto cfg = tiny();
  lockfree_hopscotch_set t(table_config::for_capacity(cfg.capacity(), cfg.seed));
  const auto keys = prefill(t, cfg);
  EXPECT_EQ(keys.size(), 614u);
  EXPECT_EQ(t.count_members(), 614u);
  const std::set<key_type> unique(keys.begin(), keys.end());
  EXPECT_EQ(unique.size(), keys.size());
  EXPECT_GE(*unique.begin(), 1u);
  EXPECT_LE(*unique.rbegin(), cfg.keyrange());
}

TEST(Prefill, IsDeterministicPerSeed) {
  auto cfg = tiny();
  lockfree_hopscotch_set a(table_config::for_capacity(cfg.capacity()));
  lockfree_hopscotch_set b(table_config::for_capacity(cfg.capacity()));
  locked_hopscotch_set c(table_config::for_capacity(cfg.capacity()));
  const auto ka = prefill(a, cfg);
  EXPECT_EQ(ka, prefill(b, cfg));
  EXPECT_EQ(ka, prefill(c, cfg));
  cfg.seed = 2;
  lockfree_hopscotch_set d(table_config::for_capacity(cfg.capacity()));
  EXPECT_NE(ka, prefill(d, cfg));
}

class BenchmarkRun : public ::testing::TestWithParam<table_kind> {};

TEST_P(BenchmarkRun, ProducesConsistentRepetitions) {
  auto cfg = tiny(GetParam());
  // Steady-state occupancy wanders by about sqrt(keyrange)/2 entries; 2^10 is too small for +-2%.
  cfg.capacity_log2 = 16;
  cfg.threads = 2;
  cfg.read_pct = 60;
  const auto r = run_benchmark(cfg);
  ASSERT_EQ(r.reps.size(), 2u);
  double sum = 0;
  for (unsigned i = 0; i < r.reps.size(); ++i) {
    const auto& rep = r.reps[i];
    EXPECT_EQ(rep.rep, i);
    ASSERT_EQ(rep.per_thread_ops.size(), 2u);
    EXPECT_EQ(rep.total_ops, std::accumulate(rep.per_thread_ops.begin(), rep.per_thread_ops.end(), std::uint64_t{0}));
    EXPECT_GT(rep.total_ops, 0u);
    EXPECT_GE(rep.elapsed_secs, cfg.duration_secs);
    EXPECT_NEAR(rep.ops_per_usec, rep.total_ops / (rep.elapsed_secs * 1e6), 1e-9);
    EXPECT_NEAR(rep.measured_load, cfg.load_factor, 0.02);
    for (const auto& first : rep.first_op) EXPECT_GE(first, rep.released);
    sum += rep.ops_per_usec;
  }
  EXPECT_NEAR(r.mean_ops_per_usec, sum / 2, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Tables, BenchmarkRun, ::testing::Values(table_kind::hs_lockfree, table_kind::hs_locked),
                         [](const auto& info) { return info.param == table_kind::hs_lockfree ? "Lockfree" : "Locked"; });

bench_result fake_result() {
  bench_result r;
  r.config = tiny();
  r.config.threads = 4;
  rep_result a;
  a.rep = 0;
  a.total_ops = 1000;
  a.ops_per_usec = 12.5;
  rep_result b = a;
  b.rep = 1;
  b.total_ops = 2000;
  b.ops_per_usec = 25.25;
  r.reps = {a, b};
  return r;
}

TEST(Csv, HeaderMatchesExactly) {
  EXPECT_EQ(kCsvHeader, "table,capacity_log2,load_factor,read_pct,threads,rep,duration_secs,total_ops,ops_per_usec");
}

TEST(Csv, HeaderOnlyForEmptyResults) {
  std::ostringstream out;
  write_csv(out, {});
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n");
}

TEST(Csv, OneRowPerRepetition) {
  std::ostringstream out;
  write_csv(out, {fake_result()});
  std::istringstream in(out.str());
  const auto rows = read_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].table, "hs-lockfree");
  EXPECT_EQ(rows[0].capacity_log2, 10u);
  EXPECT_DOUBLE_EQ(rows[0].load_factor, 0.6);
  EXPECT_EQ(rows[0].read_pct, 90u);
  EXPECT_EQ(rows[0].threads, 4u);
  EXPECT_EQ(rows[1].rep, 1u);
  EXPECT_DOUBLE_EQ(rows[1].duration_secs, 0.05);
  EXPECT_EQ(rows[1].total_ops, 2000u);
  EXPECT_DOUBLE_EQ(rows[1].ops_per_usec, 25.25);
}

TEST(Csv, AppendWritesHeaderOnce) {
  const auto path = std::filesystem::temp_directory_path() / "lfhs_harness_append.csv";
  std::filesystem::remove(path);
  emit_csv(path, {fake_result()});
  emit_csv(path, {fake_result()});
  std::ifstream in(path);
  std::string line;
  std::size_t headers = 0, lines = 0;
  while (std::getline(in, line)) {
    headers += line == kCsvHeader;
    ++lines;
  }
  EXPECT_EQ(headers, 1u);
  EXPECT_EQ(lines, 5u);
  EXPECT_EQ(read_csv(path).size(), 4u);
  std::filesystem::remove(path);
}

TEST(Csv, MalformedInputNamesTheLine) {
  std::istringstream bad(std::string(kCsvHeader) + "\nhs-locked,10,0.6,90,1,0,2,100\n");
  try {
    read_csv(bad);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream header("table,x\n");
  EXPECT_THROW(read_csv(header), std::runtime_error);
}

}  // namespace
