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

#include "gwsim/asic.hpp"

namespace gwsim {

const char *drop_reason_name(DropReason r) {
  switch (r) {
    case DropReason::NoClassification: return "no_classification";
    case DropReason::TenantMiss: return "tenant_miss";
    case DropReason::RouteMiss: return "route_miss";
    case DropReason::NexthopMiss: return "nexthop_miss";
    case DropReason::AclDeny: return "acl_deny";
    case DropReason::VmNcMiss: return "vm_nc_miss";
    case DropReason::DpuRouteMiss: return "dpu_route_miss";
    case DropReason::SwQueueOverflow: return "sw_queue_overflow";
  }
  return "unknown";
}

const char *disposition_name(Disposition d) {
  switch (d) {
    case Disposition::AsicOnly: return "asic_only";
    case Disposition::FastHit: return "fast_hit";
    case Disposition::SlowPath: return "slow_path";
    case Disposition::PuntToCpu: return "punt_to_cpu";
    case Disposition::Drop: return "drop";
    case Disposition::Software: return "software";
  }
  return "unknown";
}

bool AsicPipeline::add_tenant(uint32_t vni, TenantBinding binding) {
  return tenants_.emplace(vni, binding).second;
}

bool AsicPipeline::add_policy_route(uint16_t route_table_id,
                                    const Ipv4Prefix &src_prefix,
                                    uint32_t instance_id) {
  return policy_tables_[route_table_id].insert(src_prefix, instance_id);
}

bool AsicPipeline::add_route(uint32_t instance_id, const Ipv4Prefix &dst_prefix,
                             RouteTarget target) {
  return routing_instances_[instance_id].insert(dst_prefix, target);
}

bool AsicPipeline::add_ecmp_group(EcmpGroup group) {
  if (group.members.empty())
    throw ConfigError("ECMP group " + std::to_string(group.group_id) +
                      " has no members");
  uint32_t id = group.group_id;
  return ecmp_groups_.emplace(id, std::move(group)).second;
}

bool AsicPipeline::add_nexthop(NexthopEntry nh) {
  uint32_t idx = nh.nexthop_index;
  if (idx > kMaxNexthopIndex)
    throw ConfigError("nexthop index exceeds 24 bits");
  return nexthops_.emplace(idx, nh).second;
}

TrafficClass AsicPipeline::classify_traffic(const PacketDescriptor &p) const {
  if (p.encap.has_value() && vteps_.count(p.outer_src_ip))
    return TrafficClass::TenantVxlan;
  if (!p.encap.has_value()) {
    for (const auto &rule : protocol_rules_)
      if (rule.matches(p.inner)) return TrafficClass::ControlProtocol;
  }
  return TrafficClass::Unknown;
}

const TenantBinding *AsicPipeline::tenant_lookup(uint32_t vni) const {
  auto it = tenants_.find(vni);
  return it == tenants_.end() ? nullptr : &it->second;
}

uint32_t AsicPipeline::policy_route(uint16_t route_table_id,
                                    uint32_t inner_src_ip) const {
  auto it = policy_tables_.find(route_table_id);
  if (it == policy_tables_.end()) return 0;
  const uint32_t *instance = it->second.lookup(inner_src_ip);
  return instance ? *instance : 0;  // miss -> tenant default instance
}

const RouteTarget *AsicPipeline::route_lookup(uint32_t instance_id,
                                              uint32_t inner_dst_ip) const {
  auto it = routing_instances_.find(instance_id);
  if (it == routing_instances_.end()) return nullptr;
  return it->second.lookup(inner_dst_ip);
}

uint32_t AsicPipeline::ecmp_select(const EcmpGroup &group,
                                   const FiveTuple &t) const {
  return group.members[five_tuple_hash(t, hash_seed_) % group.members.size()];
}

const EcmpGroup *AsicPipeline::ecmp_group(uint32_t group_id) const {
  auto it = ecmp_groups_.find(group_id);
  return it == ecmp_groups_.end() ? nullptr : &it->second;
}

unsigned AsicPipeline::select_dpu(const FiveTuple &t) const {
  if (mode_.kind == DistributionMode::Kind::Pinned) {
    auto it = mode_.pins.find(t);
    if (it != mode_.pins.end()) return it->second;
  }
  return five_tuple_hash(t, hash_seed_) % kNumDpus;
}

const NexthopEntry *AsicPipeline::nexthop(uint32_t index) const {
  auto it = nexthops_.find(index);
  return it == nexthops_.end() ? nullptr : &it->second;
}

PreDpuResult AsicPipeline::pre_dpu_process(const PacketDescriptor &p) const {
  PreDpuResult r;
  r.metadata.trace_id = p.trace_id;

  TrafficClass cls = classify_traffic(p);
  switch (divert_control(cls)) {
    case ControlDisposition::PuntToCpu:
      r.metadata.path_flags = path_flags::kToCpu;
      r.decision.kind = PathDecision::Kind::PuntToCpu;
      return r;
    case ControlDisposition::Drop:
      r.decision.kind = PathDecision::Kind::Drop;
      r.decision.drop_reason = DropReason::NoClassification;
      return r;
    case ControlDisposition::Continue:
      break;
  }

  const TenantBinding *tenant = tenant_lookup(p.encap->vni);
  if (!tenant) {
    r.decision.kind = PathDecision::Kind::Drop;
    r.decision.drop_reason = DropReason::TenantMiss;
    return r;
  }
  r.metadata.svc_id = tenant->svc_id;
  r.metadata.version = services_->version_of(tenant->svc_id);
  r.metadata.route_table_id = tenant->route_table_id;

  uint32_t instance = policy_route(tenant->route_table_id, p.inner.src_ip);
  const RouteTarget *target = route_lookup(instance, p.inner.dst_ip);
  if (!target) {
    r.decision.kind = PathDecision::Kind::Drop;
    r.decision.drop_reason = DropReason::RouteMiss;
    return r;
  }

  if (target->local_vm && dpu_enabled_) {
    // Hand off to a DPU; the nexthop comes back in the returned metadata.
    r.metadata.path_flags = path_flags::kToDpu;
    r.decision.kind = PathDecision::Kind::ToDpu;
    r.decision.dpu_index = select_dpu(p.inner);
    return r;
  }

  uint32_t nh_index = target->id;
  if (target->kind == RouteTarget::Kind::EcmpGroup) {
    const EcmpGroup *group = ecmp_group(target->id);
    if (!group) {
      r.decision.kind = PathDecision::Kind::Drop;
      r.decision.drop_reason = DropReason::NexthopMiss;
      return r;
    }
    nh_index = ecmp_select(*group, p.inner);
  }
  r.metadata.nexthop_index = nh_index;
  r.metadata.path_flags = path_flags::kAsicOnly;
  r.decision.kind = PathDecision::Kind::AsicOnly;
  return r;
}

PostDpuResult AsicPipeline::post_dpu_process(const InternalMetadata &m) const {
  PostDpuResult r;
  const NexthopEntry *nh = nexthop(m.nexthop_index);
  if (!nh) {
    r.ok = false;
    r.drop_reason = DropReason::NexthopMiss;
    return r;
  }
  r.ok = true;
  r.action.out_port = nh->out_port;
  r.action.new_outer_dst_ip = nh->new_outer_dst_ip;
  r.action.vni = nh->vni;
  return r;
}

}  // namespace gwsim
