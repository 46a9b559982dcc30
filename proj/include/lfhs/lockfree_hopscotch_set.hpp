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

/// @file lockfree_hopscotch_set.hpp
/// @brief Lock-free Hopscotch hash set over machine-word keys.
///
/// Each bucket carries a key slot, a versioned state word, the neighbourhood
/// bit-mask of entries whose home is this bucket, and a relocation counter.
/// Insertion is eager: claim an Empty bucket as Busy, pull it back into the
/// home neighbourhood by swapping it with movable Member entries (a 3-word
/// K-CAS that also bumps the mover's relocation counter), publish the key as
/// Inserting, then run a uniqueness scan over the home neighbourhood before
/// committing to Member. Readers snapshot the home relocation counter and
/// rescan whenever it moved.

#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <thread>
#include <vector>

#include "lfhs/hash.hpp"
#include "lfhs/kcas.hpp"
#include "lfhs/table_config.hpp"
#include "lfhs/versioned_state.hpp"

namespace lfhs {

/// Quiescent copy of one bucket.
struct bucket_view {
  key_type key = kNilKey;
  versioned_state vs;
  std::uint64_t bitmask = 0;
  std::uint64_t relocations = 0;
};

/// Result of find_closer_bucket(): the bucket the caller now owns and its distance from home.
struct displacement {
  std::size_t bucket;
  std::size_t offset;
  friend bool operator==(const displacement&, const displacement&) = default;
};

enum class uniqueness_outcome {
  inserted,   // committed to Member
  duplicate,  // a Member with the same key exists
  preempted,  // lost to a concurrent insertion of the same key; caller retries
};

namespace testing {
template <class Table>
struct table_access;
}

namespace detail {
enum class table_hook_point { claimed };
using table_hook_fn = void (*)(table_hook_point, std::size_t bucket);
/// Test-only stall injection; null in normal operation.
inline thread_local table_hook_fn table_hook = nullptr;
}  // namespace detail

template <class Hasher = seeded_mixer>
class basic_lockfree_hopscotch_set {
 public:
  explicit basic_lockfree_hopscotch_set(table_config config, Hasher hasher = Hasher())
      : config_(config), hasher_(hasher) {
    config_.validate();
    mask_ = config_.capacity - 1;
    buckets_ = std::make_unique<bucket[]>(config_.capacity);
  }

  basic_lockfree_hopscotch_set(const basic_lockfree_hopscotch_set&) = delete;
  basic_lockfree_hopscotch_set& operator=(const basic_lockfree_hopscotch_set&) = delete;

  const table_config& config() const noexcept { return config_; }
  std::size_t capacity() const noexcept { return config_.capacity; }
  unsigned neighborhood() const noexcept { return config_.neighborhood; }

  std::size_t home_of(key_type key) const noexcept { return hasher_(config_.seed, key) & mask_; }

  bool contains(key_type key) const {
    require_key(key);
    return find_member(home_of(key), key);
  }

  /// True iff `key` went from absent to Member in this call.
  /// Throws table_saturated when no bucket can be brought into the neighbourhood.
  bool add(key_type key) {
    require_key(key);
    const std::size_t home = home_of(key);
    for (;;) {
      if (config_.prescan && find_member(home, key)) return false;

      std::size_t offset = 0;
      std::size_t rb = home;
      if (!claim_from(home, rb, offset)) throw table_saturated("no Empty bucket within max_distance");
      if (detail::table_hook != nullptr) detail::table_hook(detail::table_hook_point::claimed, rb);

      bool restart = false;
      while (offset >= config_.neighborhood) {
        const displacement moved = find_closer_bucket(rb, offset);
        if (moved.bucket == rb) {
          // Buckets in flux may become movable; anything else is a full neighbourhood.
          const bool transient = window_in_flux(rb);
          release_claim(rb);
          if (!transient) throw table_saturated("no closer bucket found");
          restart = true;
          break;
        }
        rb = moved.bucket;
        offset = moved.offset;
      }
      if (restart) {
        std::this_thread::yield();
        continue;
      }

      const versioned_state owned = load_state(rb);
      assert(owned.state == bucket_state::busy);
      at(rb).key.store(key, std::memory_order_release);
      transition(rb, owned, owned.with(bucket_state::inserting));
      at(home).bitmask.fetch_or(bit(offset));

      switch (settle(rb, home, offset, owned.version, key)) {
        case uniqueness_outcome::inserted:
          return true;
        case uniqueness_outcome::duplicate:
          return false;
        case uniqueness_outcome::preempted:
          std::this_thread::yield();
          break;
      }
    }
  }

  bool remove(key_type key) {
    require_key(key);
    const std::size_t home = home_of(key);
    std::uint64_t rc_before = kcas::read(at(home).relocations);
    for (;;) {
      std::uint64_t bits = at(home).bitmask.load();
      while (bits != 0) {
        const unsigned lsb = static_cast<unsigned>(std::countr_zero(bits));
        const std::size_t index = (home + lsb) & mask_;
        while (at(index).key.load() == key) {
          const versioned_state seen = load_state(index);
          if (seen.state != bucket_state::member || at(index).key.load() != key) break;
          std::uint64_t expected = seen.pack();
          if (kcas::compare_exchange(at(index).vs, expected, seen.with(bucket_state::busy).pack())) {
            at(index).key.store(kNilKey, std::memory_order_release);
            [[maybe_unused]] const auto prior = at(home).bitmask.fetch_xor(bit(lsb));
            assert(prior & bit(lsb));
            transition(index, seen.with(bucket_state::busy), seen.next(bucket_state::empty));
            return true;
          }
        }
        bits &= bits - 1;
      }
      const std::uint64_t rc_after = kcas::read(at(home).relocations);
      if (rc_after == rc_before) return false;
      rc_before = rc_after;
    }
  }

  /// Moves the Busy bucket `rb` (owned by the caller, `offset` from its
  /// inserter's home) closer by swapping it with the farthest-back movable
  /// Member. Returns the bucket the caller now owns and its new offset, or
  /// {rb, offset} unchanged when nothing can move.
  displacement find_closer_bucket(std::size_t rb, std::size_t offset) {
    const versioned_state rb_state = load_state(rb);
    assert(rb_state.state == bucket_state::busy);
  restart:
    for (std::size_t dist = config_.neighborhood - 1; dist > 0; --dist) {
      const std::size_t cb = (rb - dist) & mask_;
      const std::uint64_t rc_before = kcas::read(at(cb).relocations);
      std::uint64_t bits = at(cb).bitmask.load();
      while (bits != 0) {
        const unsigned lsb = static_cast<unsigned>(std::countr_zero(bits));
        // Only entries before rb gain anything from the swap.
        if (lsb >= dist) break;
        const std::size_t i = (cb + lsb) & mask_;
        const versioned_state candidate = load_state(i);
        if (candidate.state == bucket_state::member) {
          const key_type moving = at(i).key.load();
          // A stale bit may point at an unrelated entry; the key must belong to cb.
          if (load_state(i) == candidate && moving != kNilKey && home_of(moving) == cb) {
            at(rb).key.store(moving, std::memory_order_release);
            at(cb).bitmask.fetch_or(bit(dist));
            auto op = kcas::acquire();
            op.add(at(cb).relocations, rc_before, rc_before + 1);
            op.add(at(i).vs, candidate.pack(), candidate.next(bucket_state::busy).pack());
            op.add(at(rb).vs, rb_state.pack(), rb_state.with(bucket_state::member).pack());
            if (!op.execute()) {
              at(cb).bitmask.fetch_xor(bit(dist));
              goto restart;
            }
            at(cb).bitmask.fetch_xor(bit(lsb));
            return {i, offset - (dist - lsb)};
          }
        }
        bits &= bits - 1;
      }
      if (kcas::read(at(cb).relocations) != rc_before) goto restart;
    }
    return {rb, offset};
  }

  /// Uniqueness scan for the Inserting bucket `rb` whose home is `home`.
  /// True iff the entry became a Member; otherwise the bucket is reverted to Empty.
  bool uniqueness_check(std::size_t rb, std::size_t home) {
    const versioned_state own = load_state(rb);
    assert(own.state == bucket_state::inserting);
    const std::size_t offset = (rb - home) & mask_;
    return settle(rb, home, offset, own.version, at(rb).key.load()) == uniqueness_outcome::inserted;
  }

  /// Snapshot of bucket `index`; meaningful at quiescence.
  bucket_view inspect(std::size_t index) const {
    const bucket& b = at(index);
    return {b.key.load(), load_state(index), b.bitmask.load(), kcas::read(b.relocations)};
  }

  /// Keys of all Member buckets; meaningful at quiescence.
  std::vector<key_type> members() const {
    std::vector<key_type> out;
    for (std::size_t i = 0; i < config_.capacity; ++i) {
      if (load_state(i).state == bucket_state::member) out.push_back(at(i).key.load());
    }
    return out;
  }

  std::size_t count_members() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < config_.capacity; ++i) n += load_state(i).state == bucket_state::member;
    return n;
  }

 private:
  template <class>
  friend struct testing::table_access;

  struct alignas(32) bucket {
    // Written only by the bucket's owner, always before a seq_cst RMW on a
    // state word or bit-mask; release stores suffice.
    std::atomic<key_type> key{kNilKey};
    kcas::Word vs;
    std::atomic<std::uint64_t> bitmask{0};
    kcas::Word relocations;
  };

  static constexpr std::uint64_t bit(std::size_t i) noexcept { return std::uint64_t{1} << i; }

  bucket& at(std::size_t i) noexcept { return buckets_[i]; }
  const bucket& at(std::size_t i) const noexcept { return buckets_[i]; }

  [[gnu::always_inline]] versioned_state load_state(std::size_t i) const { return versioned_state::unpack(kcas::read(at(i).vs)); }

  // Transition of a bucket the caller owns; nobody else may change it.
  void transition(std::size_t i, versioned_state from, versioned_state to) {
    std::uint64_t expected = from.pack();
    [[maybe_unused]] const bool ok = kcas::compare_exchange(at(i).vs, expected, to.pack());
    assert(ok);
  }

  [[gnu::always_inline]] bool find_member(std::size_t home, key_type key) const {
    std::uint64_t rc_before = kcas::read(at(home).relocations);
    for (;;) {
      std::uint64_t bits = at(home).bitmask.load();
      while (bits != 0) {
        const unsigned lsb = static_cast<unsigned>(std::countr_zero(bits));
        const std::size_t index = (home + lsb) & mask_;
        bits &= bits - 1;
        // A Member holding `key` has `key` in its slot, so a mismatch can be skipped unvalidated.
        if (at(index).key.load() != key) continue;
        const versioned_state seen = load_state(index);
        if (seen.state == bucket_state::member && at(index).key.load() == key && load_state(index) == seen) {
          return true;
        }
      }
      const std::uint64_t rc_after = kcas::read(at(home).relocations);
      if (rc_after == rc_before) return false;
      rc_before = rc_after;
    }
  }

  // Linear probe for an Empty bucket; on success rb/offset name the Busy claim.
  bool claim_from(std::size_t home, std::size_t& rb, std::size_t& offset) {
    for (offset = 0; offset < config_.max_distance; ++offset) {
      rb = (home + offset) & mask_;
      versioned_state seen = load_state(rb);
      while (seen.state == bucket_state::empty) {
        std::uint64_t expected = seen.pack();
        if (kcas::compare_exchange(at(rb).vs, expected, seen.next(bucket_state::busy).pack())) return true;
        seen = versioned_state::unpack(expected);
      }
    }
    return false;
  }

  void release_claim(std::size_t rb) {
    const versioned_state owned = load_state(rb);
    at(rb).key.store(kNilKey, std::memory_order_release);
    transition(rb, owned, owned.next(bucket_state::empty));
  }

  bool window_in_flux(std::size_t rb) const {
    for (std::size_t dist = 1; dist < config_.neighborhood; ++dist) {
      if (load_state((rb - dist) & mask_).state != bucket_state::member) return true;
    }
    return false;
  }

  // Collided -> Busy -> Empty, dropping the key and its home bit.
  void revert(std::size_t rb, std::size_t home, std::size_t offset, std::uint64_t version) {
    std::uint64_t expected = versioned_state{version, bucket_state::inserting}.pack();
    kcas::compare_exchange(at(rb).vs, expected, versioned_state{version, bucket_state::collided}.pack());
    transition(rb, {version, bucket_state::collided}, {version, bucket_state::busy});
    at(rb).key.store(kNilKey, std::memory_order_release);
    at(home).bitmask.fetch_xor(bit(offset));
    transition(rb, {version, bucket_state::busy}, {version + 1, bucket_state::empty});
  }

  uniqueness_outcome settle(std::size_t rb, std::size_t home, std::size_t offset, std::uint64_t version,
                            key_type key) {
    const std::uint64_t own_bit = bit(offset);
    for (;;) {
      const std::uint64_t rc_before = kcas::read(at(home).relocations);
      std::uint64_t bits = at(home).bitmask.load() & ~own_bit;
      while (bits != 0) {
        const unsigned lsb = static_cast<unsigned>(std::countr_zero(bits));
        const std::size_t index = (home + lsb) & mask_;
        while (at(index).key.load() == key) {
          const versioned_state seen = load_state(index);
          if (seen.state != bucket_state::member && seen.state != bucket_state::inserting) break;
          const key_type other = at(index).key.load();
          if (load_state(index) != seen) continue;
          if (other != key) break;
          if (seen.state == bucket_state::member) {
            revert(rb, home, offset, version);
            return uniqueness_outcome::duplicate;
          }
          // Equal keys both Inserting: the one closer to home wins.
          if (lsb < offset) {
            revert(rb, home, offset, version);
            return uniqueness_outcome::preempted;
          }
          std::uint64_t expected = seen.pack();
          if (kcas::compare_exchange(at(index).vs, expected, seen.with(bucket_state::collided).pack())) break;
        }
        bits &= bits - 1;
      }
      if (kcas::read(at(home).relocations) != rc_before) {
        if (load_state(rb).state == bucket_state::collided) {
          revert(rb, home, offset, version);
          return uniqueness_outcome::preempted;
        }
        continue;
      }
      std::uint64_t expected = versioned_state{version, bucket_state::inserting}.pack();
      if (kcas::compare_exchange(at(rb).vs, expected, versioned_state{version, bucket_state::member}.pack())) {
        return uniqueness_outcome::inserted;
      }
      // Only a higher-priority inserter of the same key can have changed our state.
      revert(rb, home, offset, version);
      return uniqueness_outcome::preempted;
    }
  }

  table_config config_;
  Hasher hasher_;
  std::size_t mask_ = 0;
  std::unique_ptr<bucket[]> buckets_;
};

using lockfree_hopscotch_set = basic_lockfree_hopscotch_set<>;

}  // namespace lfhs
