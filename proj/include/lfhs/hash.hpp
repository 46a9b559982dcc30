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

#include <cstdint>

namespace lfhs {

/// Full-avalanche 64-bit finalizer (MurmurHash3 fmix64).
constexpr std::uint64_t fmix64(std::uint64_t x) noexcept {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

/// Default key hasher: mixes the key with a per-table seed.
struct seeded_mixer {
  constexpr std::uint64_t operator()(std::uint64_t seed, std::uint64_t key) const noexcept {
    return fmix64(key ^ fmix64(seed + 0x9e3779b97f4a7c15ULL));
  }
};

}  // namespace lfhs
