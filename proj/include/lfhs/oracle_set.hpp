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

#include <cstddef>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "lfhs/operation.hpp"
#include "lfhs/table_config.hpp"

namespace lfhs {

/// Exact sequential set; ground truth for replay checks.
class oracle_set {
 public:
  bool add(key_type key) { return keys_.insert(key).second; }
  bool remove(key_type key) { return keys_.erase(key) != 0; }
  bool contains(key_type key) const { return keys_.count(key) != 0; }

  bool apply(op_kind op, key_type key) { return lfhs::apply(*this, op, key); }

  std::size_t size() const noexcept { return keys_.size(); }
  std::vector<key_type> members() const { return {keys_.begin(), keys_.end()}; }

 private:
  std::unordered_set<key_type> keys_;
};

}  // namespace lfhs
