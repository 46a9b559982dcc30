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

#include "displacement_oracle.hpp"

namespace {

TEST(DisplacementOracle, MatchesBruteForceOnEveryConfiguration) {
  const auto r = lfhs::testing::run_displacement_oracle();
  EXPECT_EQ(r.configurations, 8u * 78125u);
  EXPECT_EQ(r.mismatches, 0u) << r.first_mismatch;
}

}  // namespace
