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

#ifndef GWSIM_NET_HPP_
#define GWSIM_NET_HPP_

#include <cstdint>
#include <string>

#include "gwsim/errors.hpp"

namespace gwsim {

// IPv4 addresses are host-order uint32_t throughout; byte order only matters
// at serialization boundaries.

uint32_t parse_ipv4(const std::string &dotted);
std::string format_ipv4(uint32_t addr);

struct Ipv4Prefix {
  uint32_t addr = 0;  // stored canonical: host bits zeroed
  uint8_t len = 0;    // 0..32

  static constexpr uint32_t mask_for(uint8_t len) {
    return len == 0 ? 0u : ~uint32_t{0} << (32 - len);
  }

  uint32_t mask() const { return mask_for(len); }

  bool matches(uint32_t ip) const { return (ip & mask()) == addr; }

  // True when every address under `other` is also under this prefix.
  bool contains(const Ipv4Prefix &other) const {
    return len <= other.len && (other.addr & mask()) == addr;
  }

  bool operator==(const Ipv4Prefix &o) const {
    return addr == o.addr && len == o.len;
  }

  // "a.b.c.d/len"; a bare address parses as /32.
  static Ipv4Prefix parse(const std::string &text);

  std::string str() const;
};

}  // namespace gwsim

#endif  // GWSIM_NET_HPP_
