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

#include "lfhs/hash.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cstdint>
#include <vector>

namespace {

TEST(SeededMixer, IsDeterministic) {
  const lfhs::seeded_mixer h;
  for (std::uint64_t k = 1; k < 1000; ++k) EXPECT_EQ(h(7, k), h(7, k));
}

TEST(SeededMixer, SeedChangesMapping) {
  const lfhs::seeded_mixer h;
  int same = 0;
  for (std::uint64_t k = 1; k <= 4096; ++k) same += (h(1, k) & 1023) == (h(2, k) & 1023);
  // About 4 collisions expected by chance.
  EXPECT_LT(same, 32);
}

TEST(SeededMixer, SequentialKeysSpreadUniformly) {
  constexpr std::size_t kBuckets = 1 << 10;
  constexpr std::uint64_t kKeys = 1 << 20;
  const lfhs::seeded_mixer h;
  std::vector<std::uint64_t> counts(kBuckets);
  for (std::uint64_t k = 1; k <= kKeys; ++k) ++counts[h(0, k) & (kBuckets - 1)];
  const double expected = static_cast<double>(kKeys) / kBuckets;
  double chi2 = 0;
  for (const auto c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(kBuckets - 1);
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.99));
}

TEST(Fmix64, ZeroIsFixedAndNeighboursDiffer) {
  EXPECT_EQ(lfhs::fmix64(0), 0u);
  EXPECT_NE(lfhs::fmix64(1), lfhs::fmix64(2));
}

}  // namespace
