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

/// @file linearizability.hpp
/// @brief Exhaustive linearizability search for small set histories.
///
/// Depth-first search over orders consistent with real time: an operation may
/// be placed next only if it was invoked before every still-pending operation
/// responded. (placed-ops, set-state) pairs already refuted are memoised.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "lfhs/checker/history.hpp"

namespace lfhs::checker {

inline constexpr std::size_t kMaxSearchOps = 14;

class search_bound_exceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct linearizability_result {
  bool linearizable = false;
  /// Indices into the input history, in linearization order (when linearizable).
  std::vector<std::size_t> witness;
  /// Shortest invocation-ordered prefix that is not linearizable (when not).
  history violating_prefix;
};

namespace detail {

class linearization_search {
 public:
  linearization_search(const history& h, const std::vector<key_type>& initial) : h_(h) {
    for (const auto& r : h_) {
      if (std::find(keys_.begin(), keys_.end(), r.key) == keys_.end()) keys_.push_back(r.key);
    }
    for (const auto k : initial) {
      const auto it = std::find(keys_.begin(), keys_.end(), k);
      if (it != keys_.end()) state0_ |= 1u << (it - keys_.begin());
    }
    key_index_.reserve(h_.size());
    for (const auto& r : h_) {
      key_index_.push_back(static_cast<unsigned>(std::find(keys_.begin(), keys_.end(), r.key) - keys_.begin()));
    }
  }

  bool run(std::vector<std::size_t>& order) {
    order.clear();
    refuted_.clear();
    return search(0, state0_, order);
  }

 private:
  bool search(std::uint32_t placed, std::uint32_t state, std::vector<std::size_t>& order) {
    const std::size_t n = h_.size();
    if (placed == (n == 32 ? ~0u : (1u << n) - 1)) return true;
    const std::uint64_t memo = (std::uint64_t{placed} << 32) | state;
    if (refuted_.count(memo) != 0) return false;

    std::uint64_t earliest_response = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(placed & (1u << i))) earliest_response = std::min(earliest_response, h_[i].response);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if ((placed & (1u << i)) || h_[i].invoke > earliest_response) continue;
      const std::uint32_t bit = 1u << key_index_[i];
      const bool present = (state & bit) != 0;
      bool expected = false;
      std::uint32_t next = state;
      switch (h_[i].op) {
        case op_kind::contains:
          expected = present;
          break;
        case op_kind::add:
          expected = !present;
          next = state | bit;
          break;
        case op_kind::remove:
          expected = present;
          next = state & ~bit;
          break;
      }
      if (expected != h_[i].result) continue;
      order.push_back(i);
      if (search(placed | (1u << i), next, order)) return true;
      order.pop_back();
    }
    refuted_.insert(memo);
    return false;
  }

  const history& h_;
  std::vector<key_type> keys_;
  std::vector<unsigned> key_index_;
  std::uint32_t state0_ = 0;
  std::unordered_set<std::uint64_t> refuted_;
};

inline bool linearizable(const history& h, const std::vector<key_type>& initial, std::vector<std::size_t>& order) {
  linearization_search search(h, initial);
  return search.run(order);
}

}  // namespace detail

/// Decides whether `h` (starting from the set `initial`) is linearizable
/// against sequential set semantics. Throws search_bound_exceeded beyond
/// kMaxSearchOps operations.
inline linearizability_result check_linearizable(const history& h, const std::vector<key_type>& initial = {}) {
  if (h.size() > kMaxSearchOps) throw search_bound_exceeded("history longer than kMaxSearchOps");
  validate(h);

  linearizability_result result;
  if (detail::linearizable(h, initial, result.witness)) {
    result.linearizable = true;
    return result;
  }
  result.witness.clear();

  history by_invoke = h;
  std::sort(by_invoke.begin(), by_invoke.end(),
            [](const op_record& a, const op_record& b) { return a.invoke < b.invoke; });
  std::vector<std::size_t> scratch;
  for (std::size_t n = 1; n <= by_invoke.size(); ++n) {
    history prefix(by_invoke.begin(), by_invoke.begin() + static_cast<std::ptrdiff_t>(n));
    if (!detail::linearizable(prefix, initial, scratch)) {
      result.violating_prefix = std::move(prefix);
      break;
    }
  }
  return result;
}

}  // namespace lfhs::checker
