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
#include <string_view>

namespace lfhs {

/// Life cycle of one bucket. Visible belongs to probe-bound variants;
/// fixed neighbourhoods never enter it.
enum class bucket_state : std::uint8_t { empty = 0, busy, collided, visible, inserting, member };

constexpr std::string_view to_string(bucket_state s) noexcept {
  switch (s) {
    case bucket_state::empty:
      return "Empty";
    case bucket_state::busy:
      return "Busy";
    case bucket_state::collided:
      return "Collided";
    case bucket_state::visible:
      return "Visible";
    case bucket_state::inserting:
      return "Inserting";
    case bucket_state::member:
      return "Member";
  }
  return "?";
}

/// (version, state) packed into the 62-bit payload of a K-CAS word.
struct versioned_state {
  static constexpr unsigned kStateBits = 3;
  static constexpr std::uint64_t kStateMask = (std::uint64_t{1} << kStateBits) - 1;

  std::uint64_t version = 0;
  bucket_state state = bucket_state::empty;

  constexpr std::uint64_t pack() const noexcept {
    return (version << kStateBits) | static_cast<std::uint64_t>(state);
  }
  static constexpr versioned_state unpack(std::uint64_t packed) noexcept {
    return {packed >> kStateBits, static_cast<bucket_state>(packed & kStateMask)};
  }
  constexpr versioned_state with(bucket_state s) const noexcept { return {version, s}; }
  constexpr versioned_state next(bucket_state s) const noexcept { return {version + 1, s}; }

  friend constexpr bool operator==(const versioned_state&, const versioned_state&) = default;
};

}  // namespace lfhs
