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

#include "gwsim/net.hpp"

#include <cstdlib>

namespace gwsim {

uint32_t parse_ipv4(const std::string &dotted) {
  uint32_t out = 0;
  size_t pos = 0;
  for (int octet = 0; octet < 4; octet++) {
    if (pos >= dotted.size())
      throw ConfigError("bad IPv4 address: " + dotted);
    size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(dotted.substr(pos), &used, 10);
    } catch (const std::exception &) {
      throw ConfigError("bad IPv4 address: " + dotted);
    }
    if (used == 0 || v > 255) throw ConfigError("bad IPv4 address: " + dotted);
    out = (out << 8) | static_cast<uint32_t>(v);
    pos += used;
    if (octet < 3) {
      if (pos >= dotted.size() || dotted[pos] != '.')
        throw ConfigError("bad IPv4 address: " + dotted);
      pos++;
    }
  }
  if (pos != dotted.size()) throw ConfigError("bad IPv4 address: " + dotted);
  return out;
}

std::string format_ipv4(uint32_t addr) {
  return std::to_string((addr >> 24) & 0xff) + "." +
         std::to_string((addr >> 16) & 0xff) + "." +
         std::to_string((addr >> 8) & 0xff) + "." +
         std::to_string(addr & 0xff);
}

Ipv4Prefix Ipv4Prefix::parse(const std::string &text) {
  Ipv4Prefix p;
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    p.addr = parse_ipv4(text);
    p.len = 32;
    return p;
  }
  p.addr = parse_ipv4(text.substr(0, slash));
  unsigned long len = 0;
  try {
    size_t used = 0;
    len = std::stoul(text.substr(slash + 1), &used, 10);
    if (used != text.size() - slash - 1) throw ConfigError("");
  } catch (const std::exception &) {
    throw ConfigError("bad prefix: " + text);
  }
  if (len > 32) throw ConfigError("prefix length out of range: " + text);
  p.len = static_cast<uint8_t>(len);
  p.addr &= p.mask();
  return p;
}

std::string Ipv4Prefix::str() const {
  return format_ipv4(addr) + "/" + std::to_string(len);
}

}  // namespace gwsim
