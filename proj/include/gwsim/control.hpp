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

#ifndef GWSIM_CONTROL_HPP_
#define GWSIM_CONTROL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gwsim/asic.hpp"
#include "gwsim/dpu.hpp"
#include "gwsim/services.hpp"

namespace gwsim {

// Capacity-profiled table kinds (gateway configuration surface).
enum class TableKind {
  GwVtep,
  GwProtocol,
  GwTenant,
  GwPolicyRoute,
  GwRoute,
  GwNexthop,
  GwEcmpGroup,
  GwHost,  // VM-NC
  GwNetAcl,
  GwInterface,
  GwMeter,
  GwNexthopAffinity,
};

const char *table_kind_name(TableKind k);

// Per-gateway-variant capacity limits. Kinds a variant does not support are
// simply absent. scale_divisor shrinks full-scale limits proportionally for
// desk-scale runs (ratios preserved).
class CapacityProfile {
 public:
  CapacityProfile() = default;
  CapacityProfile(std::string name, std::map<TableKind, uint64_t> caps)
      : name_(std::move(name)), caps_(std::move(caps)) {}

  static CapacityProfile tofino_only(uint64_t scale_divisor = 1);
  static CapacityProfile zephyrus(uint64_t scale_divisor = 1);
  static CapacityProfile software(uint64_t scale_divisor = 1);

  bool supports(TableKind k) const { return caps_.count(k) > 0; }
  uint64_t cap(TableKind k) const;
  const std::string &name() const { return name_; }
  const std::map<TableKind, uint64_t> &caps() const { return caps_; }

 private:
  std::string name_;
  std::map<TableKind, uint64_t> caps_;
};

enum class InstallOutcome { Ok, CapacityExceeded, DuplicateKey };

enum class SetModeOutcome { Ok, InvalidDpuIndex };

struct ConflictPair {
  std::string table_a;
  Ipv4Prefix prefix_a;
  std::string table_b;
  Ipv4Prefix prefix_b;
};

// Every cross-table containment pair (the condition under which coalesced
// LPM could multi-match). Laminar interval sweep, O(n log n); the test
// oracle is the naive pairwise scan.
std::vector<ConflictPair> check_collision(
    const std::vector<LogicalPrefixTable> &tables);

struct CoalescePlan {
  enum class Verdict { Coalesced, Refused };

  Verdict verdict = Verdict::Refused;
  std::vector<std::string> constituents;
  std::vector<uint8_t> probe_lengths;  // strictly decreasing
  std::vector<ConflictPair> conflicts;
  std::optional<CoalescedTable> table;  // present iff Coalesced
};

CoalescePlan coalesce_tables(const std::vector<LogicalPrefixTable> &tables);

// All gateway dataplane state under one roof; components hold pointers to
// their shared read-only siblings. Addresses must stay stable.
struct Gateway {
  explicit Gateway(size_t dpu_cache_capacity);

  Gateway(const Gateway &) = delete;
  Gateway &operator=(const Gateway &) = delete;

  ServiceRegistry services;
  AsicPipeline asic;
  VmNcTable vm_nc;
  DpuRouteEngine dpu_routes;
  std::vector<AclRule> acl;
  std::vector<DpuDatapath> dpus;
};

// Runtime mutations requested mid-run; applied only at event boundaries.
struct ControlOp {
  enum class Kind { BumpVersion, SetDistributionMode, PinFlow, UnpinFlow };

  Kind kind = Kind::BumpVersion;
  uint16_t svc_id = 0;
  DistributionMode mode;
  FiveTuple flow;
  unsigned dpu_index = 0;
};

// Single logical writer for all component tables. Installation happens only
// between simulation events; readers always observe a complete generation.
class ControlPlane {
 public:
  ControlPlane(Gateway *gw, CapacityProfile profile)
      : gw_(gw), profile_(std::move(profile)) {}

  // --- rule installation (event-boundary context) ---
  InstallOutcome install_vtep(uint32_t ip);
  InstallOutcome install_protocol_rule(ProtocolRule rule);
  InstallOutcome install_service(ServiceObject svc);
  InstallOutcome install_tenant(uint32_t vni, TenantBinding binding);
  InstallOutcome install_policy_route(uint16_t route_table_id,
                                      const Ipv4Prefix &src_prefix,
                                      uint32_t instance_id);
  InstallOutcome install_route(uint32_t instance_id,
                               const Ipv4Prefix &dst_prefix,
                               RouteTarget target);
  InstallOutcome install_ecmp_group(EcmpGroup group);
  InstallOutcome install_nexthop(NexthopEntry nh);
  InstallOutcome install_vm_nc(uint16_t route_table_id, uint32_t vm_ip,
                               uint32_t host_address);
  InstallOutcome install_acl(AclRule rule);
  InstallOutcome install_dpu_route_entry(const std::string &logical_table,
                                         const Ipv4Prefix &prefix,
                                         uint32_t action);
  // Kinds with no datapath semantics here (interface, meter, affinity):
  // capacity accounting plus duplicate detection over an opaque key.
  InstallOutcome install_generic(TableKind kind, uint64_t key);

  // Builds the DPU route engine from the staged logical tables: coalesced
  // single table when conflict-free, per-table fallback otherwise.
  CoalescePlan build_dpu_routes();

  // --- runtime ops: queued, applied at the next event boundary ---
  void queue_bump_version(uint16_t svc_id);
  SetModeOutcome queue_set_distribution_mode(DistributionMode mode);
  SetModeOutcome queue_pin_flow(const FiveTuple &flow, unsigned dpu_index);
  void queue_unpin_flow(const FiveTuple &flow);

  // Applies every queued op atomically; bumps the generation once.
  void apply_pending();
  bool has_pending() const { return !pending_.empty(); }
  uint64_t generation() const { return generation_; }

  uint64_t installed_count(TableKind kind) const;
  const CapacityProfile &profile() const { return profile_; }
  const std::vector<LogicalPrefixTable> &staged_dpu_tables() const {
    return staged_dpu_tables_;
  }

 private:
  InstallOutcome gate(TableKind kind);  // capacity check; throws if unsupported
  void count(TableKind kind) { counts_[kind]++; }

  Gateway *gw_;
  CapacityProfile profile_;
  std::map<TableKind, uint64_t> counts_;
  std::vector<LogicalPrefixTable> staged_dpu_tables_;
  std::map<TableKind, std::set<uint64_t>> generic_keys_;
  std::vector<ControlOp> pending_;
  DistributionMode current_mode_;
  uint64_t generation_ = 0;
};

}  // namespace gwsim

#endif  // GWSIM_CONTROL_HPP_
