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

/// @file ledger_audit.hpp
/// @brief Per-key success ledger: successful adds and removes of a key must
/// alternate, and their balance must match the key's final membership.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lfhs/checker/history.hpp"

namespace lfhs::checker {

struct ledger_report {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks, for every key, that the number of members implied by successful
/// adds/removes stays within {0, 1} at every instant (using interval bounds,
/// since overlapping operations have no fixed order) and ends equal to the
/// key's presence in `final_members`. `initial` lists keys present before
/// the history began.
inline ledger_report ledger_audit(const history& h, const std::vector<key_type>& final_members,
                                  const std::vector<key_type>& initial = {}) {
  ledger_report report;

  std::unordered_set<key_type> final_set;
  for (const auto k : final_members) {
    if (!final_set.insert(k).second) report.violations.push_back("key " + std::to_string(k) + " present twice");
  }
  const std::unordered_set<key_type> initial_set(initial.begin(), initial.end());

  // Bounds on the membership count: lower counts adds once responded and
  // removes once invoked; upper counts adds once invoked and removes once responded.
  struct event {
    std::uint64_t stamp;
    int lower;
    int upper;
  };
  std::unordered_map<key_type, std::vector<event>> events;
  std::unordered_map<key_type, long> balance;
  for (const auto& r : h) {
    if (!r.result || r.op == op_kind::contains) continue;
    auto& ev = events[r.key];
    if (r.op == op_kind::add) {
      ev.push_back({r.invoke, 0, +1});
      ev.push_back({r.response, +1, 0});
      ++balance[r.key];
    } else {
      ev.push_back({r.invoke, -1, 0});
      ev.push_back({r.response, 0, -1});
      --balance[r.key];
    }
  }

  auto check_final = [&](key_type k, long start) {
    const long end = start + balance[k];
    const long actual = final_set.count(k) ? 1 : 0;
    if (end != actual) {
      report.violations.push_back("key " + std::to_string(k) + ": ledger ends at " + std::to_string(end) +
                                  " but final membership is " + std::to_string(actual));
    }
  };

  for (auto& [key, ev] : events) {
    std::sort(ev.begin(), ev.end(), [](const event& a, const event& b) { return a.stamp < b.stamp; });
    const long start = initial_set.count(key) ? 1 : 0;
    long lower = start;
    long upper = start;
    for (const auto& e : ev) {
      lower += e.lower;
      upper += e.upper;
      if (lower > 1 || upper < 0) {
        report.violations.push_back("key " + std::to_string(key) + ": ledger leaves {0,1} at stamp " +
                                    std::to_string(e.stamp));
        break;
      }
    }
    check_final(key, start);
  }
  // Keys with no successful update must keep their initial membership.
  for (const auto k : final_set) {
    if (!events.count(k) && !initial_set.count(k)) {
      report.violations.push_back("key " + std::to_string(k) + " present but never added");
    }
  }
  for (const auto k : initial_set) {
    if (!events.count(k) && !final_set.count(k)) {
      report.violations.push_back("key " + std::to_string(k) + " vanished without a remove");
    }
  }
  return report;
}

}  // namespace lfhs::checker
