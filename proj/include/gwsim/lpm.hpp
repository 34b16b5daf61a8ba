/* Copyright 2026-present gwsim contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GWSIM_LPM_HPP_
#define GWSIM_LPM_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "gwsim/net.hpp"

namespace gwsim {

// Longest-prefix-match table over IPv4, the TCAM-style lookup of the ASIC
// pipeline. Plain bit-at-a-time binary trie in a flat arena; insert-only
// (rule changes replace values, never remove prefixes mid-run).
template <class V>
class LpmTable {
 public:
  // False if the exact prefix is already present (caller maps this to a
  // DuplicateKey outcome). `overwrite` replaces instead.
  bool insert(const Ipv4Prefix &prefix, V value, bool overwrite = false) {
    int node = 0;
    for (uint8_t depth = 0; depth < prefix.len; depth++) {
      int bit = (prefix.addr >> (31 - depth)) & 1;
      int next = nodes_[node].child[bit];
      if (next < 0) {
        next = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[node].child[bit] = next;
      }
      node = next;
    }
    if (nodes_[node].value.has_value() && !overwrite) return false;
    if (!nodes_[node].value.has_value()) size_++;
    nodes_[node].value = std::move(value);
    return true;
  }

  bool contains(const Ipv4Prefix &prefix) const {
    int node = 0;
    for (uint8_t depth = 0; depth < prefix.len; depth++) {
      node = nodes_[node].child[(prefix.addr >> (31 - depth)) & 1];
      if (node < 0) return false;
    }
    return nodes_[node].value.has_value();
  }

  // Longest matching prefix, or nullptr.
  const V *lookup(uint32_t ip) const {
    const V *best =
        nodes_[0].value.has_value() ? &*nodes_[0].value : nullptr;
    int node = 0;
    for (int depth = 0; depth < 32; depth++) {
      int bit = (ip >> (31 - depth)) & 1;
      node = nodes_[node].child[bit];
      if (node < 0) break;
      if (nodes_[node].value.has_value()) best = &*nodes_[node].value;
    }
    return best;
  }

  size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

 private:
  struct Node {
    int child[2] = {-1, -1};
    std::optional<V> value;
  };

  std::vector<Node> nodes_{1};  // node 0 is the /0 root
  size_t size_ = 0;
};

}  // namespace gwsim

#endif  // GWSIM_LPM_HPP_
