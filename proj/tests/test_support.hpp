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

// Test-only helpers: raw bucket setup for scripted scenarios and key search by home bucket.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lfhs/lockfree_hopscotch_set.hpp"

namespace lfhs::testing {

template <class Hasher>
struct table_access<basic_lockfree_hopscotch_set<Hasher>> {
  using table = basic_lockfree_hopscotch_set<Hasher>;

  /// Writes `key` as a Member at `bucket` and sets its home bit. No checks.
  static void place_member(table& t, std::size_t bucket, key_type key, std::uint64_t version = 1) {
    const std::size_t home = t.home_of(key);
    t.at(bucket).key.store(key);
    t.at(bucket).vs.reset(versioned_state{version, bucket_state::member}.pack());
    t.at(home).bitmask.fetch_or(std::uint64_t{1} << ((bucket - home) & (t.capacity() - 1)));
  }

  static void set_state(table& t, std::size_t bucket, versioned_state vs) { t.at(bucket).vs.reset(vs.pack()); }
  static void set_key(table& t, std::size_t bucket, key_type key) { t.at(bucket).key.store(key); }
  static void set_bitmask(table& t, std::size_t bucket, std::uint64_t bits) { t.at(bucket).bitmask.store(bits); }
  static std::uint64_t bitmask(const table& t, std::size_t bucket) { return t.at(bucket).bitmask.load(); }
};

using lockfree_access = table_access<lockfree_hopscotch_set>;

/// The first `count` keys (scanning upward from 1) whose home is `home`.
template <class Table>
std::vector<key_type> keys_with_home(const Table& table, std::size_t home, std::size_t count,
                                     key_type start = 1) {
  std::vector<key_type> out;
  for (key_type k = start; out.size() < count; ++k) {
    if (k == 0) throw std::runtime_error("key space exhausted");
    if (table.home_of(k) == home) out.push_back(k);
  }
  return out;
}

}  // namespace lfhs::testing
