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

#ifndef GWSIM_ASIC_HPP_
#define GWSIM_ASIC_HPP_

#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gwsim/disposition.hpp"
#include "gwsim/lpm.hpp"
#include "gwsim/packet.hpp"
#include "gwsim/services.hpp"

namespace gwsim {

// Folded-pipeline capacity model: four chained pipelines multiply per-packet
// stage resources and divide aggregate bandwidth by the same factor.
inline constexpr double kUnfoldedAggregateTbps = 6.4;
inline constexpr int kPipelineFoldFactor = 4;
inline constexpr double folded_bandwidth_tbps() {
  return kUnfoldedAggregateTbps / kPipelineFoldFactor;
}

inline constexpr unsigned kNumDpus = 4;  // 4 x 400 Gbps matches the fold
inline constexpr unsigned kNumPipelines = 4;
inline constexpr unsigned kStagesPerPipeline = 12;

enum class TrafficClass { TenantVxlan, ControlProtocol, Unknown };

// Control/protocol traffic match: proto plus optional destination port
// (0 = any). Matched against the bare header tuple of unencapsulated packets.
struct ProtocolRule {
  uint8_t proto = 0;
  uint16_t dst_port = 0;

  bool matches(const FiveTuple &t) const {
    return t.proto == proto && (dst_port == 0 || t.dst_port == dst_port);
  }
};

struct TenantBinding {
  uint16_t route_table_id = 0;
  uint16_t svc_id = 0;
};

struct RouteTarget {
  enum class Kind : uint8_t { Nexthop, EcmpGroup };

  Kind kind = Kind::Nexthop;
  uint32_t id = 0;
  bool local_vm = false;  // destination hosted behind this gateway

  bool operator==(const RouteTarget &) const = default;
};

struct EcmpGroup {
  uint32_t group_id = 0;
  std::vector<uint32_t> members;  // nexthop indices, non-empty
};

struct NexthopEntry {
  uint32_t nexthop_index = 0;
  uint32_t out_port = 0;
  // Encapsulation rewrite: new outer destination (target VTEP) and VNI.
  uint32_t new_outer_dst_ip = 0;
  uint32_t vni = 0;
};

struct EgressAction {
  uint32_t out_port = 0;
  uint32_t new_outer_dst_ip = 0;
  uint32_t vni = 0;
};

struct FiveTupleHasher {
  size_t operator()(const FiveTuple &t) const { return five_tuple_hash(t); }
};

struct DistributionMode {
  enum class Kind { Hash, Pinned };

  Kind kind = Kind::Hash;
  // Pinned entries override the hash; absent flows fall back to it.
  std::unordered_map<FiveTuple, unsigned, FiveTupleHasher> pins;
};

struct PathDecision {
  enum class Kind { AsicOnly, ToDpu, PuntToCpu, Drop };

  Kind kind = Kind::Drop;
  unsigned dpu_index = 0;
  DropReason drop_reason = DropReason::NoClassification;
};

struct PreDpuResult {
  PathDecision decision;
  InternalMetadata metadata;
};

struct PostDpuResult {
  bool ok = false;
  EgressAction action;
  DropReason drop_reason = DropReason::NexthopMiss;
};

// The switching-ASIC model: pre-DPU lookup chain (classification, tenant
// identification, policy routing, LPM routing, ECMP, DPU selection) and the
// post-DPU nexthop stage. Lookups are read-only; installation happens only
// between simulation events.
class AsicPipeline {
 public:
  explicit AsicPipeline(const ServiceRegistry *services)
      : services_(services) {}

  // --- table installation (control plane only) ---
  bool add_vtep(uint32_t ip) { return vteps_.insert(ip).second; }
  void add_protocol_rule(ProtocolRule r) { protocol_rules_.push_back(r); }
  bool add_tenant(uint32_t vni, TenantBinding binding);
  bool add_policy_route(uint16_t route_table_id, const Ipv4Prefix &src_prefix,
                        uint32_t instance_id);
  bool add_route(uint32_t instance_id, const Ipv4Prefix &dst_prefix,
                 RouteTarget target);
  bool add_ecmp_group(EcmpGroup group);
  bool add_nexthop(NexthopEntry nh);
  void set_distribution_mode(DistributionMode mode) {
    mode_ = std::move(mode);
  }
  // TofinoOnly gateways resolve local destinations in-ASIC (no DPU stage).
  void set_dpu_enabled(bool enabled) { dpu_enabled_ = enabled; }
  void set_hash_seed(uint32_t seed) { hash_seed_ = seed; }

  // --- lookup chain ---
  TrafficClass classify_traffic(const PacketDescriptor &p) const;
  // Control traffic is diverted at ingress pipe 3; unknown traffic drops.
  enum class ControlDisposition { Continue, PuntToCpu, Drop };
  static ControlDisposition divert_control(TrafficClass cls) {
    switch (cls) {
      case TrafficClass::TenantVxlan: return ControlDisposition::Continue;
      case TrafficClass::ControlProtocol:
        return ControlDisposition::PuntToCpu;
      case TrafficClass::Unknown: break;
    }
    return ControlDisposition::Drop;
  }
  const TenantBinding *tenant_lookup(uint32_t vni) const;
  // LPM on the inner source; miss falls back to the tenant default
  // instance 0.
  uint32_t policy_route(uint16_t route_table_id, uint32_t inner_src_ip) const;
  const RouteTarget *route_lookup(uint32_t instance_id,
                                  uint32_t inner_dst_ip) const;
  uint32_t ecmp_select(const EcmpGroup &group, const FiveTuple &t) const;
  const EcmpGroup *ecmp_group(uint32_t group_id) const;
  unsigned select_dpu(const FiveTuple &t) const;
  const NexthopEntry *nexthop(uint32_t index) const;

  PreDpuResult pre_dpu_process(const PacketDescriptor &p) const;
  PostDpuResult post_dpu_process(const InternalMetadata &m) const;

  const DistributionMode &distribution_mode() const { return mode_; }
  bool dpu_enabled() const { return dpu_enabled_; }

 private:
  std::unordered_set<uint32_t> vteps_;
  std::vector<ProtocolRule> protocol_rules_;
  std::unordered_map<uint32_t, TenantBinding> tenants_;
  std::map<uint16_t, LpmTable<uint32_t>> policy_tables_;
  std::map<uint32_t, LpmTable<RouteTarget>> routing_instances_;
  std::map<uint32_t, EcmpGroup> ecmp_groups_;
  std::unordered_map<uint32_t, NexthopEntry> nexthops_;
  DistributionMode mode_;
  const ServiceRegistry *services_;
  bool dpu_enabled_ = true;
  uint32_t hash_seed_ = 0;
};

}  // namespace gwsim

#endif  // GWSIM_ASIC_HPP_
