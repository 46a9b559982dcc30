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

/// @file locked_hopscotch_set.hpp
/// @brief Blocking bit-mask Hopscotch set with segment spinlocks and timestamps.
///
/// Buckets are split into contiguous segments, one spinlock and one timestamp
/// each. A mutator locks every segment overlapping the buckets it may touch,
/// in ascending order. contains() takes no lock: it snapshots the home
/// segment's timestamp and rescans if a displacement or removal bumped it.

#pragma once

#include <atomic>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <thread>
#include <vector>

#include "lfhs/hash.hpp"
#include "lfhs/table_config.hpp"

namespace lfhs {

/// Test-and-test-and-set lock that yields after a short spin.
class spinlock {
 public:
  void lock() noexcept {
    for (unsigned spins = 0;; ++spins) {
      if (!locked_.exchange(true, std::memory_order_acquire)) return;
      while (locked_.load(std::memory_order_relaxed)) {
        if (++spins > 64) {
          std::this_thread::yield();
          spins = 0;
        }
      }
    }
  }
  void unlock() noexcept { locked_.store(false, std::memory_order_release); }

 private:
  std::atomic<bool> locked_{false};
};

struct locked_bucket_view {
  key_type key = kNilKey;
  std::uint64_t bitmask = 0;
};

template <class Hasher = seeded_mixer>
class basic_locked_hopscotch_set {
 public:
  /// Segment count is the next power of two >= `concurrency`, at most capacity.
  explicit basic_locked_hopscotch_set(table_config config, std::size_t concurrency = 1, Hasher hasher = Hasher())
      : config_(config), hasher_(hasher) {
    config_.validate();
    mask_ = config_.capacity - 1;
    std::size_t segments = std::bit_ceil(concurrency == 0 ? std::size_t{1} : concurrency);
    if (segments > config_.capacity) segments = config_.capacity;
    segment_shift_ = static_cast<unsigned>(std::countr_zero(config_.capacity / segments));
    segments_ = std::vector<segment>(segments);
    buckets_ = std::make_unique<bucket[]>(config_.capacity);
  }

  const table_config& config() const noexcept { return config_; }
  std::size_t capacity() const noexcept { return config_.capacity; }
  std::size_t segment_count() const noexcept { return segments_.size(); }
  std::size_t home_of(key_type key) const noexcept { return hasher_(config_.seed, key) & mask_; }

  bool contains(key_type key) const {
    require_key(key);
    const std::size_t home = home_of(key);
    const auto& stamp = segments_[segment_of(home)].timestamp;
    std::uint64_t before = stamp.load();
    for (;;) {
      bool found = false;
      std::uint64_t bits = buckets_[home].bitmask.load();
      while (bits != 0 && !found) {
        const auto lsb = static_cast<unsigned>(std::countr_zero(bits));
        found = buckets_[(home + lsb) & mask_].key.load() == key;
        bits &= bits - 1;
      }
      const std::uint64_t after = stamp.load();
      if (after == before) return found;
      before = after;
    }
  }

  bool add(key_type key) {
    require_key(key);
    const std::size_t home = home_of(key);
    const segment_guard guard(*this, home, config_.max_distance);
    if (find_locked(home, key) != kNotFound) return false;

    std::size_t offset = 0;
    for (; offset < config_.max_distance; ++offset) {
      if (buckets_[(home + offset) & mask_].key.load() == kNilKey) break;
    }
    if (offset == config_.max_distance) throw table_saturated("no free bucket within max_distance");

    std::size_t free = (home + offset) & mask_;
    while (offset >= config_.neighborhood) {
      const std::size_t closer = move_closer(free);
      if (closer == free) throw table_saturated("no closer bucket found");
      offset -= (free - closer) & mask_;
      free = closer;
    }
    buckets_[free].key.store(key);
    buckets_[home].bitmask.fetch_or(bit(offset));
    return true;
  }

  bool remove(key_type key) {
    require_key(key);
    const std::size_t home = home_of(key);
    const segment_guard guard(*this, home, config_.neighborhood);
    const std::size_t offset = find_locked(home, key);
    if (offset == kNotFound) return false;
    buckets_[home].bitmask.fetch_and(~bit(offset));
    segments_[segment_of(home)].timestamp.fetch_add(1);
    buckets_[(home + offset) & mask_].key.store(kNilKey);
    return true;
  }

  locked_bucket_view inspect(std::size_t index) const {
    return {buckets_[index].key.load(), buckets_[index].bitmask.load()};
  }

  std::uint64_t timestamp(std::size_t segment) const { return segments_[segment].timestamp.load(); }

  std::vector<key_type> members() const {
    std::vector<key_type> out;
    for (std::size_t i = 0; i < config_.capacity; ++i) {
      if (const auto k = buckets_[i].key.load(); k != kNilKey) out.push_back(k);
    }
    return out;
  }

  std::size_t count_members() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < config_.capacity; ++i) n += buckets_[i].key.load() != kNilKey;
    return n;
  }

 private:
  static constexpr std::size_t kNotFound = ~std::size_t{0};

  struct bucket {
    std::atomic<key_type> key{kNilKey};
    std::atomic<std::uint64_t> bitmask{0};
  };

  struct alignas(64) segment {
    spinlock lock;
    std::atomic<std::uint64_t> timestamp{0};
  };

  // Holds the locks of every segment overlapping [first, first + length).
  class segment_guard {
   public:
    segment_guard(basic_locked_hopscotch_set& set, std::size_t first, std::size_t length) : set_(set) {
      const std::size_t count = set.segments_.size();
      const std::size_t lo = set.segment_of(first);
      const std::size_t hi = set.segment_of((first + length - 1) & set.mask_);
      if (length >= set.config_.capacity) {
        begin_a_ = 0, end_a_ = count;
      } else if (hi >= lo) {
        begin_a_ = lo, end_a_ = hi + 1;
      } else {
        // Wrapped: [0, hi] then [lo, count).
        begin_a_ = 0, end_a_ = hi + 1;
        begin_b_ = lo, end_b_ = count;
      }
      for (std::size_t s = begin_a_; s < end_a_; ++s) set_.segments_[s].lock.lock();
      for (std::size_t s = begin_b_; s < end_b_; ++s) set_.segments_[s].lock.lock();
    }
    ~segment_guard() {
      for (std::size_t s = begin_a_; s < end_a_; ++s) set_.segments_[s].lock.unlock();
      for (std::size_t s = begin_b_; s < end_b_; ++s) set_.segments_[s].lock.unlock();
    }
    segment_guard(const segment_guard&) = delete;
    segment_guard& operator=(const segment_guard&) = delete;

   private:
    basic_locked_hopscotch_set& set_;
    std::size_t begin_a_ = 0, end_a_ = 0, begin_b_ = 0, end_b_ = 0;
  };

  static constexpr std::uint64_t bit(std::size_t i) noexcept { return std::uint64_t{1} << i; }
  std::size_t segment_of(std::size_t bucket) const noexcept { return bucket >> segment_shift_; }

  std::size_t find_locked(std::size_t home, key_type key) const {
    std::uint64_t bits = buckets_[home].bitmask.load();
    while (bits != 0) {
      const auto lsb = static_cast<unsigned>(std::countr_zero(bits));
      if (buckets_[(home + lsb) & mask_].key.load() == key) return lsb;
      bits &= bits - 1;
    }
    return kNotFound;
  }

  // Same scan order as the lock-free displacement: farthest-back home first,
  // lowest offset within it. Returns the freed bucket, or `free` if none moves.
  std::size_t move_closer(std::size_t free) {
    for (std::size_t dist = config_.neighborhood - 1; dist > 0; --dist) {
      const std::size_t cb = (free - dist) & mask_;
      const std::uint64_t bits = buckets_[cb].bitmask.load();
      if (bits == 0) continue;
      const auto lsb = static_cast<std::size_t>(std::countr_zero(bits));
      if (lsb >= dist) continue;
      const std::size_t from = (cb + lsb) & mask_;
      buckets_[free].key.store(buckets_[from].key.load());
      buckets_[cb].bitmask.fetch_or(bit(dist));
      segments_[segment_of(cb)].timestamp.fetch_add(1);
      buckets_[cb].bitmask.fetch_and(~bit(lsb));
      buckets_[from].key.store(kNilKey);
      return from;
    }
    return free;
  }

  table_config config_;
  Hasher hasher_;
  std::size_t mask_ = 0;
  unsigned segment_shift_ = 0;
  std::vector<segment> segments_;
  std::unique_ptr<bucket[]> buckets_;
};

using locked_hopscotch_set = basic_locked_hopscotch_set<>;

}  // namespace lfhs
