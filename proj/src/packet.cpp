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

#include "gwsim/packet.hpp"

#include <bit>

#include "gwsim/errors.hpp"

namespace gwsim {

bool metadata_flags_valid(uint8_t flags) {
  if (flags & ~path_flags::kAllMask) return false;
  return std::popcount(static_cast<unsigned>(flags & path_flags::kPathMask)) <=
         1;
}

void validate_metadata(const InternalMetadata &m) {
  if (m.nexthop_index > kMaxNexthopIndex)
    throw MetadataError(MetadataError::Code::FieldRange,
                        "nexthop_index exceeds 24 bits");
  if (!metadata_flags_valid(m.path_flags))
    throw MetadataError(MetadataError::Code::InvalidFlags,
                        "invalid path flags");
}

std::array<uint8_t, kMetadataWireLen> serialize_metadata(
    const InternalMetadata &m) {
  validate_metadata(m);
  std::array<uint8_t, kMetadataWireLen> out{};
  out[0] = static_cast<uint8_t>(m.svc_id >> 8);
  out[1] = static_cast<uint8_t>(m.svc_id);
  out[2] = static_cast<uint8_t>(m.version >> 8);
  out[3] = static_cast<uint8_t>(m.version);
  out[4] = static_cast<uint8_t>(m.route_table_id >> 8);
  out[5] = static_cast<uint8_t>(m.route_table_id);
  out[6] = static_cast<uint8_t>(m.nexthop_index >> 16);
  out[7] = static_cast<uint8_t>(m.nexthop_index >> 8);
  out[8] = static_cast<uint8_t>(m.nexthop_index);
  out[9] = m.path_flags;
  // [10,16) stay zero: reserved + padding
  return out;
}

InternalMetadata parse_metadata(const uint8_t *data, size_t len,
                                uint64_t trace_id) {
  if (len != kMetadataWireLen)
    throw MetadataError(MetadataError::Code::LengthMismatch,
                        "metadata length " + std::to_string(len) +
                            ", expected " + std::to_string(kMetadataWireLen));
  InternalMetadata m;
  m.svc_id = static_cast<uint16_t>(data[0] << 8 | data[1]);
  m.version = static_cast<uint16_t>(data[2] << 8 | data[3]);
  m.route_table_id = static_cast<uint16_t>(data[4] << 8 | data[5]);
  m.nexthop_index = static_cast<uint32_t>(data[6]) << 16 |
                    static_cast<uint32_t>(data[7]) << 8 | data[8];
  m.path_flags = data[9];
  m.trace_id = trace_id;
  if (!metadata_flags_valid(m.path_flags))
    throw MetadataError(MetadataError::Code::InvalidFlags,
                        "invalid path flags 0x" + std::to_string(data[9]));
  return m;
}

}  // namespace gwsim
