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

/// @file kcas.hpp
/// @brief Lock-free multi-word compare-and-swap with per-thread reusable descriptors.
///
/// Words managed by this engine reserve their two low bits as a tag. A plain
/// value v is stored as (v << 2); a nonzero tag marks a reference to a shared
/// descriptor that any thread touching the word helps to completion.
///
///   tag 00  plain value
///   tag 01  K-CAS descriptor reference
///   tag 10  RDCSS descriptor reference (install step of a K-CAS)
///
/// A reference packs (sequence << 12) | (owner << 2) | tag. Each thread owns one
/// K-CAS record and one RDCSS record for its whole lifetime; every reuse bumps
/// the record's sequence number, so a reference from an earlier incarnation
/// simply fails validation and is ignored.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lfhs::kcas {

inline constexpr std::size_t kMaxEntries = 8;
inline constexpr std::uint32_t kMaxThreads = 1024;
/// Largest plain value a Word can hold (62 bits).
inline constexpr std::uint64_t kMaxValue = (std::uint64_t{1} << 62) - 1;

enum class status : std::uint64_t { undecided = 0, succeeded = 1, failed = 2 };

namespace detail {

inline constexpr std::uint64_t kTagMask = 0b11;
inline constexpr std::uint64_t kTagPlain = 0b00;
inline constexpr std::uint64_t kTagKcas = 0b01;
inline constexpr std::uint64_t kTagRdcss = 0b10;
inline constexpr unsigned kOwnerShift = 2;
inline constexpr unsigned kSeqShift = 12;
static_assert((std::uint64_t{1} << (kSeqShift - kOwnerShift)) == kMaxThreads);

constexpr std::uint64_t encode(std::uint64_t value) noexcept { return value << 2; }
constexpr std::uint64_t decode(std::uint64_t raw) noexcept { return raw >> 2; }
constexpr std::uint64_t tag_of(std::uint64_t raw) noexcept { return raw & kTagMask; }

constexpr std::uint64_t make_ref(std::uint64_t tag, std::uint32_t owner, std::uint64_t seq) noexcept {
  return (seq << kSeqShift) | (std::uint64_t{owner} << kOwnerShift) | tag;
}
constexpr std::uint32_t ref_owner(std::uint64_t ref) noexcept {
  return static_cast<std::uint32_t>((ref >> kOwnerShift) & (kMaxThreads - 1));
}
constexpr std::uint64_t ref_seq(std::uint64_t ref) noexcept { return ref >> kSeqShift; }

// Descriptor state word: (seq << 2) | status.
constexpr std::uint64_t make_state(std::uint64_t seq, status s) noexcept {
  return (seq << 2) | static_cast<std::uint64_t>(s);
}
constexpr std::uint64_t state_seq(std::uint64_t state) noexcept { return state >> 2; }
constexpr status state_status(std::uint64_t state) noexcept { return static_cast<status>(state & 0b11); }

struct alignas(64) kcas_record {
  struct slot {
    std::atomic<std::uint64_t> address{0};
    std::atomic<std::uint64_t> expected{0};  // raw (encoded) words
    std::atomic<std::uint64_t> desired{0};
  };
  std::atomic<std::uint64_t> state{make_state(0, status::succeeded)};
  std::atomic<std::uint64_t> count{0};
  std::array<slot, kMaxEntries> slots;
};

struct alignas(64) rdcss_record {
  std::atomic<std::uint64_t> seq{0};
  std::atomic<std::uint64_t> control_address{0};
  std::atomic<std::uint64_t> control_expected{0};
  std::atomic<std::uint64_t> data_address{0};
  std::atomic<std::uint64_t> data_expected{0};
  std::atomic<std::uint64_t> data_new{0};
};

inline kcas_record* kcas_pool() {
  static const std::unique_ptr<kcas_record[]> pool(new kcas_record[kMaxThreads]);
  return pool.get();
}

inline rdcss_record* rdcss_pool() {
  static const std::unique_ptr<rdcss_record[]> pool(new rdcss_record[kMaxThreads]);
  return pool.get();
}

// Thread ids are leased for the lifetime of a thread and recycled on exit.
class thread_registry {
 public:
  static thread_registry& instance() {
    static thread_registry registry;
    return registry;
  }

  std::uint32_t lease() {
    std::lock_guard lock(mutex_);
    if (!free_.empty()) {
      const auto id = free_.back();
      free_.pop_back();
      return id;
    }
    if (next_ == kMaxThreads) {
      throw std::runtime_error("kcas: more than kMaxThreads live threads");
    }
    return next_++;
  }

  void release(std::uint32_t id) {
    std::lock_guard lock(mutex_);
    free_.push_back(id);
  }

 private:
  std::mutex mutex_;
  std::vector<std::uint32_t> free_;
  std::uint32_t next_ = 0;
};

struct thread_slot {
  // Touch the pools first so they outlive every thread_slot destructor.
  thread_slot() : id((kcas_pool(), rdcss_pool(), thread_registry::instance().lease())) {}
  ~thread_slot() { thread_registry::instance().release(id); }
  thread_slot(const thread_slot&) = delete;
  thread_slot& operator=(const thread_slot&) = delete;
  std::uint32_t id;
};

/// Points at which a K-CAS owner calls the test hook (if one is installed).
enum class hook_point { installed_entry, decided };
using hook_fn = void (*)(hook_point, std::size_t entry);
inline thread_local hook_fn owner_hook = nullptr;

}  // namespace detail

/// Id of the calling thread within the descriptor pools.
inline std::uint32_t this_thread_id() {
  thread_local detail::thread_slot slot;
  return slot.id;
}

/// A 64-bit word that K-CAS operations may target. Holds 62-bit plain values.
class Word {
 public:
  constexpr Word() noexcept = default;
  explicit Word(std::uint64_t value) noexcept : raw_(detail::encode(value)) { assert(value <= kMaxValue); }

  Word(const Word&) = delete;
  Word& operator=(const Word&) = delete;

  /// Unsynchronized initialisation; only valid before the word is shared.
  void reset(std::uint64_t value) noexcept { raw_.store(detail::encode(value), std::memory_order_relaxed); }

  /// The undecoded word, descriptor tags included.
  std::uint64_t raw() const noexcept { return raw_.load(); }

  std::atomic<std::uint64_t>& atomic_raw() noexcept { return raw_; }
  const std::atomic<std::uint64_t>& atomic_raw() const noexcept { return raw_; }

 private:
  std::atomic<std::uint64_t> raw_{0};
};

namespace detail {

inline std::atomic<std::uint64_t>* as_atomic(std::uint64_t address) noexcept {
  return reinterpret_cast<std::atomic<std::uint64_t>*>(address);
}

inline void rdcss_complete(std::uint64_t ref) {
  rdcss_record& rec = rdcss_pool()[ref_owner(ref)];
  const std::uint64_t seq = ref_seq(ref);
  if (rec.seq.load() != seq) return;
  const auto control_address = rec.control_address.load();
  const auto control_expected = rec.control_expected.load();
  const auto data_address = rec.data_address.load();
  const auto data_expected = rec.data_expected.load();
  const auto data_new = rec.data_new.load();
  if (rec.seq.load() != seq) return;

  const bool install = as_atomic(control_address)->load() == control_expected;
  std::uint64_t current = ref;
  as_atomic(data_address)->compare_exchange_strong(current, install ? data_new : data_expected);
}

// Installs `data_new` at `data` if it holds `data_expected` while `control`
// holds `control_expected`. Returns the raw word observed at `data` (never an
// RDCSS reference).
inline std::uint64_t rdcss(std::atomic<std::uint64_t>& control, std::uint64_t control_expected,
                           std::atomic<std::uint64_t>& data, std::uint64_t data_expected,
                           std::uint64_t data_new) {
  const auto self = this_thread_id();
  rdcss_record& rec = rdcss_pool()[self];
  const std::uint64_t seq = rec.seq.load() + 1;
  rec.seq.store(seq);
  rec.control_address.store(reinterpret_cast<std::uint64_t>(&control));
  rec.control_expected.store(control_expected);
  rec.data_address.store(reinterpret_cast<std::uint64_t>(&data));
  rec.data_expected.store(data_expected);
  rec.data_new.store(data_new);
  const std::uint64_t ref = make_ref(kTagRdcss, self, seq);

  for (;;) {
    std::uint64_t current = data_expected;
    if (data.compare_exchange_strong(current, ref)) {
      rdcss_complete(ref);
      return data_expected;
    }
    if (tag_of(current) == kTagRdcss) {
      rdcss_complete(current);
      continue;
    }
    return current;
  }
}

struct snapshot_entry {
  std::atomic<std::uint64_t>* location;
  std::uint64_t expected;
  std::uint64_t desired;
};

/// Drives the K-CAS identified by `ref` to completion. Returns the outcome, or
/// nullopt when `ref` is stale (the descriptor has since been reused, so the
/// operation it named finished long ago).
inline std::optional<bool> help(std::uint64_t ref) {
  const std::uint32_t owner = ref_owner(ref);
  const std::uint64_t seq = ref_seq(ref);
  kcas_record& rec = kcas_pool()[owner];

  std::uint64_t state = rec.state.load();
  if (state_seq(state) != seq) return std::nullopt;
  const auto count = static_cast<std::size_t>(rec.count.load());
  if (count > kMaxEntries) return std::nullopt;
  std::array<snapshot_entry, kMaxEntries> entries{};
  for (std::size_t i = 0; i < count; ++i) {
    entries[i] = {as_atomic(rec.slots[i].address.load()), rec.slots[i].expected.load(),
                  rec.slots[i].desired.load()};
  }
  state = rec.state.load();
  if (state_seq(state) != seq) return std::nullopt;

  const bool is_owner = owner == this_thread_id();

  if (state_status(state) == status::undecided) {
    status outcome = status::succeeded;
    const std::uint64_t undecided = make_state(seq, status::undecided);
    for (std::size_t i = 0; i < count && outcome == status::succeeded; ++i) {
      for (;;) {
        const std::uint64_t seen = rdcss(rec.state, undecided, *entries[i].location, entries[i].expected, ref);
        if (tag_of(seen) == kTagKcas) {
          if (seen == ref) break;
          help(seen);
          continue;
        }
        if (seen != entries[i].expected) outcome = status::failed;
        break;
      }
      if (is_owner && owner_hook != nullptr && outcome == status::succeeded) {
        owner_hook(hook_point::installed_entry, i);
      }
    }
    std::uint64_t expected_state = undecided;
    rec.state.compare_exchange_strong(expected_state, make_state(seq, outcome));
    if (is_owner && owner_hook != nullptr) owner_hook(hook_point::decided, count);
  }

  state = rec.state.load();
  if (state_seq(state) != seq) return std::nullopt;
  const bool succeeded = state_status(state) == status::succeeded;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t current = ref;
    entries[i].location->compare_exchange_strong(current, succeeded ? entries[i].desired : entries[i].expected);
  }
  return succeeded;
}

/// Resolve whatever descriptor `raw` refers to.
inline void help_any(std::uint64_t raw) {
  if (tag_of(raw) == kTagRdcss) {
    rdcss_complete(raw);
  } else if (tag_of(raw) == kTagKcas) {
    help(raw);
  }
}

}  // namespace detail

namespace detail {

[[gnu::noinline]] inline std::uint64_t read_slow(const Word& word) {
  for (;;) {
    const std::uint64_t raw = word.raw();
    if (tag_of(raw) == kTagPlain) return decode(raw);
    help_any(raw);
  }
}

[[gnu::noinline]] inline bool compare_exchange_slow(Word& word, std::uint64_t& expected, std::uint64_t desired) {
  for (;;) {
    std::uint64_t current = encode(expected);
    if (word.atomic_raw().compare_exchange_strong(current, encode(desired))) return true;
    if (tag_of(current) != kTagPlain) {
      help_any(current);
      continue;
    }
    expected = decode(current);
    return false;
  }
}

}  // namespace detail

/// Reads the committed plain value of `word`, helping any in-flight operation first.
inline std::uint64_t read(const Word& word) {
  const std::uint64_t raw = word.raw();
  if (detail::tag_of(raw) == detail::kTagPlain) [[likely]] return detail::decode(raw);
  return detail::read_slow(word);
}

/// Single-word CAS on plain values. On failure `expected` receives the current value.
inline bool compare_exchange(Word& word, std::uint64_t& expected, std::uint64_t desired) {
  assert(expected <= kMaxValue && desired <= kMaxValue);
  std::uint64_t current = detail::encode(expected);
  if (word.atomic_raw().compare_exchange_strong(current, detail::encode(desired))) [[likely]] return true;
  if (detail::tag_of(current) == detail::kTagPlain) {
    expected = detail::decode(current);
    return false;
  }
  return detail::compare_exchange_slow(word, expected, desired);
}

/// One K-CAS operation backed by the calling thread's descriptor.
///
/// Acquiring bumps the descriptor's sequence number, which invalidates every
/// reference left over from the previous use. Entries are staged locally and
/// copied into the shared record, sorted by address, when execute() runs.
class operation {
 public:
  operation(const operation&) = delete;
  operation& operator=(const operation&) = delete;

  void add(Word& location, std::uint64_t expected, std::uint64_t desired) {
    if (size_ == kMaxEntries) throw std::length_error("kcas: too many entries");
    if (expected > kMaxValue || desired > kMaxValue) throw std::invalid_argument("kcas: value exceeds 62 bits");
    for (std::size_t i = 0; i < size_; ++i) {
      if (staged_[i].location == &location) throw std::invalid_argument("kcas: duplicate location");
    }
    staged_[size_++] = {&location, expected, desired};
  }

  /// True iff every location held its expected value and all were replaced at once.
  bool execute() {
    assert(!executed_);
    assert(size_ > 0);
    executed_ = true;
    std::sort(staged_.begin(), staged_.begin() + size_,
              [](const staged& a, const staged& b) { return a.location < b.location; });
    detail::kcas_record& rec = detail::kcas_pool()[owner_];
    for (std::size_t i = 0; i < size_; ++i) {
      rec.slots[i].address.store(reinterpret_cast<std::uint64_t>(&staged_[i].location->atomic_raw()));
      rec.slots[i].expected.store(detail::encode(staged_[i].expected));
      rec.slots[i].desired.store(detail::encode(staged_[i].desired));
    }
    rec.count.store(size_);
    const auto outcome = detail::help(reference());
    assert(outcome.has_value());
    return *outcome;
  }

  std::uint32_t owner() const noexcept { return owner_; }
  std::uint64_t sequence() const noexcept { return seq_; }
  std::size_t size() const noexcept { return size_; }
  /// Tagged reference naming this incarnation of the descriptor.
  std::uint64_t reference() const noexcept { return detail::make_ref(detail::kTagKcas, owner_, seq_); }

 private:
  friend operation acquire();

  operation(std::uint32_t owner, std::uint64_t seq) noexcept : owner_(owner), seq_(seq) {}

  struct staged {
    Word* location;
    std::uint64_t expected;
    std::uint64_t desired;
  };

  std::uint32_t owner_;
  std::uint64_t seq_;
  std::array<staged, kMaxEntries> staged_{};
  std::size_t size_ = 0;
  bool executed_ = false;
};

/// Takes the calling thread's descriptor for a new operation.
inline operation acquire() {
  const auto self = this_thread_id();
  detail::kcas_record& rec = detail::kcas_pool()[self];
  const std::uint64_t seq = detail::state_seq(rec.state.load()) + 1;
  rec.state.store(detail::make_state(seq, status::undecided));
  return operation(self, seq);
}

}  // namespace lfhs::kcas
