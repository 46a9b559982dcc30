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

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lfhs {

using key_type = std::uint64_t;

/// Reserved key marking an unused slot. Valid keys are nonzero.
inline constexpr key_type kNilKey = 0;

/// Raised when an insertion cannot find room within the configured probe
/// limits. The table must be rebuilt with a larger capacity.
class table_saturated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct table_config {
  std::size_t capacity = std::size_t{1} << 20;
  /// Neighbourhood width H: bits in each bucket's bit-mask.
  unsigned neighborhood = 64;
  /// Linear-probe limit when claiming an empty bucket.
  std::size_t max_distance = 512;
  std::uint64_t seed = 0;
  /// Run a membership scan before claiming a bucket in add().
  bool prescan = true;

  void validate() const {
    if (capacity == 0 || !std::has_single_bit(capacity)) {
      throw std::invalid_argument("capacity must be a power of two");
    }
    if (neighborhood == 0 || neighborhood > 64) {
      throw std::invalid_argument("neighborhood must be in [1, 64]");
    }
    if (max_distance < neighborhood || max_distance > capacity) {
      throw std::invalid_argument("require neighborhood <= max_distance <= capacity");
    }
  }

  /// Default limits clamped to a (small) capacity.
  static table_config for_capacity(std::size_t capacity, std::uint64_t seed = 0) {
    table_config cfg;
    cfg.capacity = capacity;
    cfg.seed = seed;
    if (cfg.max_distance > capacity) cfg.max_distance = capacity;
    if (cfg.neighborhood > cfg.max_distance) cfg.neighborhood = static_cast<unsigned>(cfg.max_distance);
    return cfg;
  }
};

inline void require_key(key_type key) {
  if (key == kNilKey) throw std::invalid_argument("key 0 is reserved");
}

}  // namespace lfhs
