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

enum class op_kind : std::uint8_t { add, remove, contains };

constexpr std::string_view to_string(op_kind op) noexcept {
  switch (op) {
    case op_kind::add:
      return "add";
    case op_kind::remove:
      return "remove";
    case op_kind::contains:
      return "contains";
  }
  return "?";
}

/// Dispatches one set operation on any table exposing add/remove/contains.
template <class Set>
bool apply(Set& set, op_kind op, std::uint64_t key) {
  switch (op) {
    case op_kind::add:
      return set.add(key);
    case op_kind::remove:
      return set.remove(key);
    case op_kind::contains:
      return set.contains(key);
  }
  return false;
}

}  // namespace lfhs
