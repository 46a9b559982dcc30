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

/// @file structural_audit.hpp
/// @brief Quiescent invariant checks over a table's buckets. Read-only.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lfhs/locked_hopscotch_set.hpp"
#include "lfhs/lockfree_hopscotch_set.hpp"

namespace lfhs::checker {

struct violation {
  std::size_t bucket = 0;
  std::string kind;
  std::string detail;
};

struct audit_report {
  std::size_t buckets_scanned = 0;
  std::size_t members = 0;
  std::vector<violation> violations;

  bool clean() const noexcept { return violations.empty(); }

  std::string to_text() const {
    std::ostringstream out;
    out << "structural audit: " << buckets_scanned << " buckets, " << members << " members, "
        << violations.size() << " violation(s)\n";
    for (const auto& v : violations) out << "  bucket " << v.bucket << ": " << v.kind << ": " << v.detail << "\n";
    return out.str();
  }

  std::string to_json_lines() const {
    std::string out;
    for (const auto& v : violations) {
      out += nlohmann::json{{"bucket", v.bucket}, {"kind", v.kind}, {"detail", v.detail}}.dump() + "\n";
    }
    return out;
  }
};

namespace detail {

// Shared neighbourhood checks once each bucket is reduced to (occupied key, bit-mask).
template <class Table, class View>
void audit_neighbourhoods(const Table& table, const std::vector<View>& views, audit_report& report,
                          auto&& is_member) {
  const std::size_t capacity = views.size();
  const std::size_t mask = capacity - 1;
  const std::size_t width = table.config().neighborhood;
  std::unordered_map<key_type, std::size_t> seen;

  for (std::size_t b = 0; b < capacity; ++b) {
    if (!is_member(views[b])) continue;
    ++report.members;
    const key_type key = views[b].key;
    if (key == kNilKey) {
      report.violations.push_back({b, "nil-member", "member bucket holds the nil key"});
      continue;
    }
    if (const auto [it, fresh] = seen.emplace(key, b); !fresh) {
      report.violations.push_back({b, "duplicate", "key " + std::to_string(key) + " also at bucket " +
                                                       std::to_string(it->second)});
    }
    const std::size_t home = table.home_of(key);
    const std::size_t dist = (b - home) & mask;
    if (dist >= width) {
      report.violations.push_back({b, "out-of-neighbourhood", "key " + std::to_string(key) + " is " +
                                                                  std::to_string(dist) + " from home " +
                                                                  std::to_string(home)});
    } else if (!(views[home].bitmask & (std::uint64_t{1} << dist))) {
      report.violations.push_back({b, "missing-bit", "bit " + std::to_string(dist) + " of home " +
                                                         std::to_string(home) + " is clear"});
    }
  }

  for (std::size_t h = 0; h < capacity; ++h) {
    std::uint64_t bits = views[h].bitmask;
    if (width < 64 && (bits >> width) != 0) {
      report.violations.push_back({h, "wide-bit", "bit set beyond the neighbourhood width"});
      bits &= (std::uint64_t{1} << width) - 1;
    }
    while (bits != 0) {
      const auto lsb = static_cast<std::size_t>(std::countr_zero(bits));
      bits &= bits - 1;
      const std::size_t target = (h + lsb) & mask;
      if (!is_member(views[target])) {
        report.violations.push_back({h, "dangling-bit", "bit " + std::to_string(lsb) + " names non-member bucket " +
                                                            std::to_string(target)});
      } else if (table.home_of(views[target].key) != h) {
        report.violations.push_back({h, "foreign-bit", "bit " + std::to_string(lsb) + " names bucket " +
                                                           std::to_string(target) + " homed elsewhere"});
      }
    }
  }
}

}  // namespace detail

/// Bucket invariants of the lock-free table: no transient states, every
/// Member inside its home neighbourhood with its bit set, every set bit naming
/// a Member of that home, no duplicate keys, Empty buckets hold the nil key.
template <class Hasher>
audit_report structural_audit(const basic_lockfree_hopscotch_set<Hasher>& table) {
  audit_report report;
  const std::size_t capacity = table.capacity();
  std::vector<bucket_view> views(capacity);
  for (std::size_t b = 0; b < capacity; ++b) views[b] = table.inspect(b);
  report.buckets_scanned = capacity;

  for (std::size_t b = 0; b < capacity; ++b) {
    const auto state = views[b].vs.state;
    if (state != bucket_state::empty && state != bucket_state::member) {
      report.violations.push_back({b, "transient-state", std::string(to_string(state)) + " at quiescence"});
    }
    if (state == bucket_state::empty && views[b].key != kNilKey) {
      report.violations.push_back({b, "stale-key", "empty bucket holds key " + std::to_string(views[b].key)});
    }
  }
  detail::audit_neighbourhoods(table, views, report,
                               [](const bucket_view& v) { return v.vs.state == bucket_state::member; });
  return report;
}

template <class Hasher>
audit_report structural_audit(const basic_locked_hopscotch_set<Hasher>& table) {
  audit_report report;
  const std::size_t capacity = table.capacity();
  std::vector<locked_bucket_view> views(capacity);
  for (std::size_t b = 0; b < capacity; ++b) views[b] = table.inspect(b);
  report.buckets_scanned = capacity;
  detail::audit_neighbourhoods(table, views, report, [](const locked_bucket_view& v) { return v.key != kNilKey; });
  return report;
}

}  // namespace lfhs::checker
