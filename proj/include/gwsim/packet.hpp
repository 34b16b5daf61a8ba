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

#ifndef GWSIM_PACKET_HPP_
#define GWSIM_PACKET_HPP_

#include <array>
#include <cstdint>
#include <optional>

#include "gwsim/hash.hpp"

namespace gwsim {

inline constexpr uint8_t kProtoTcp = 6;
inline constexpr uint8_t kProtoUdp = 17;

struct FiveTuple {
  uint32_t src_ip = 0;
  uint32_t dst_ip = 0;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;
  uint8_t proto = 0;

  bool operator==(const FiveTuple &) const = default;

  // Ports carry meaning only for TCP/UDP.
  bool ports_valid() const {
    return proto == kProtoTcp || proto == kProtoUdp ||
           (src_port == 0 && dst_port == 0);
  }

  // Canonical 13-byte big-endian encoding: the hash input.
  std::array<uint8_t, 13> bytes() const {
    return {static_cast<uint8_t>(src_ip >> 24),
            static_cast<uint8_t>(src_ip >> 16),
            static_cast<uint8_t>(src_ip >> 8),
            static_cast<uint8_t>(src_ip),
            static_cast<uint8_t>(dst_ip >> 24),
            static_cast<uint8_t>(dst_ip >> 16),
            static_cast<uint8_t>(dst_ip >> 8),
            static_cast<uint8_t>(dst_ip),
            static_cast<uint8_t>(src_port >> 8),
            static_cast<uint8_t>(src_port),
            static_cast<uint8_t>(dst_port >> 8),
            static_cast<uint8_t>(dst_port),
            proto};
  }
};

inline uint32_t five_tuple_hash(const FiveTuple &t, uint32_t seed = 0) {
  auto b = t.bytes();
  return mix_hash(b.data(), b.size(), seed);
}

struct VxlanEncap {
  uint32_t vni = 0;  // 24-bit

  bool operator==(const VxlanEncap &) const = default;
};

inline constexpr uint32_t kMaxVni = (1u << 24) - 1;

struct PacketDescriptor {
  uint32_t outer_src_ip = 0;  // remote VTEP physical IP when encapsulated
  uint32_t outer_dst_ip = 0;
  std::optional<VxlanEncap> encap;
  FiveTuple inner;
  uint32_t payload_len = 0;
  uint64_t trace_id = 0;
  uint64_t arrival_ns = 0;
};

// ---------------------------------------------------------------------------
// Inter-component metadata header (the "private key" between ASIC and DPU).
//
// Wire layout, big-endian, 16 bytes both directions:
//
//   offset  size  field
//   [0,2)    2    svc_id
//   [2,4)    2    version
//   [4,6)    2    route_table_id
//   [6,9)    3    nexthop_index
//   [9,10)   1    path_flags
//   [10,12)  2    reserved, zero
//   [12,16)  4    zero padding
//
// trace_id is a simulation sidecar and never appears on the wire.
// ---------------------------------------------------------------------------

namespace path_flags {
inline constexpr uint8_t kAsicOnly = 0x01;
inline constexpr uint8_t kToDpu = 0x02;
inline constexpr uint8_t kToCpu = 0x04;
inline constexpr uint8_t kCacheHit = 0x08;
inline constexpr uint8_t kSlowPath = 0x10;
inline constexpr uint8_t kPathMask = kAsicOnly | kToDpu | kToCpu;
inline constexpr uint8_t kAllMask = 0x1f;
}  // namespace path_flags

inline constexpr size_t kMetadataWireLen = 16;
inline constexpr uint32_t kMaxNexthopIndex = (1u << 24) - 1;

struct InternalMetadata {
  uint16_t svc_id = 0;
  uint16_t version = 0;
  uint16_t route_table_id = 0;
  uint32_t nexthop_index = 0;  // 24-bit
  uint8_t path_flags = 0;
  uint64_t trace_id = 0;  // sidecar, not serialized

  bool operator==(const InternalMetadata &) const = default;
};

// At most one of {ASIC_ONLY, TO_DPU, TO_CPU}; zero means "not yet decided".
// Exactly-one is enforced at the pre-DPU boundary, not here.
bool metadata_flags_valid(uint8_t flags);

// Throws MetadataError(FieldRange / InvalidFlags) on out-of-range fields.
void validate_metadata(const InternalMetadata &m);

std::array<uint8_t, kMetadataWireLen> serialize_metadata(
    const InternalMetadata &m);

// Inverse of serialize_metadata. The sidecar trace_id travels next to the
// bytes in the simulator, so the caller reattaches it here.
// Throws MetadataError: LengthMismatch when len != kMetadataWireLen,
// InvalidFlags when the path-flag byte is invalid.
InternalMetadata parse_metadata(const uint8_t *data, size_t len,
                                uint64_t trace_id = 0);

// Run-scoped monotone source of unique trace ids, starting at 0.
class TraceIdSource {
 public:
  uint64_t next() { return next_++; }
  uint64_t issued() const { return next_; }

 private:
  uint64_t next_ = 0;
};

inline PacketDescriptor assign_trace_id(PacketDescriptor p,
                                        TraceIdSource &source) {
  p.trace_id = source.next();
  return p;
}

}  // namespace gwsim

#endif  // GWSIM_PACKET_HPP_
