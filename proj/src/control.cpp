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

#include "gwsim/control.hpp"

#include <algorithm>

namespace gwsim {

const char *table_kind_name(TableKind k) {
  switch (k) {
    case TableKind::GwVtep: return "gw_vtep";
    case TableKind::GwProtocol: return "gw_protocol";
    case TableKind::GwTenant: return "gw_tenant";
    case TableKind::GwPolicyRoute: return "gw_policy_route";
    case TableKind::GwRoute: return "gw_route";
    case TableKind::GwNexthop: return "gw_nexthop";
    case TableKind::GwEcmpGroup: return "gw_ecmp_group";
    case TableKind::GwHost: return "gw_host";
    case TableKind::GwNetAcl: return "gw_net_acl";
    case TableKind::GwInterface: return "gw_interface";
    case TableKind::GwMeter: return "gw_meter";
    case TableKind::GwNexthopAffinity: return "gw_nexthop_affinity";
  }
  return "unknown";
}

namespace {

std::map<TableKind, uint64_t> scaled(std::map<TableKind, uint64_t> caps,
                                     uint64_t divisor) {
  if (divisor == 0) throw ConfigError("capacity scale divisor must be > 0");
  for (auto &[k, v] : caps) v = std::max<uint64_t>(1, v / divisor);
  return caps;
}

}  // namespace

CapacityProfile CapacityProfile::tofino_only(uint64_t scale_divisor) {
  return CapacityProfile(
      "tofino_only",
      scaled({{TableKind::GwVtep, 10'000},
              {TableKind::GwProtocol, 1'000},
              {TableKind::GwTenant, 10'000},
              {TableKind::GwPolicyRoute, 50'000},
              {TableKind::GwRoute, 100'000},
              {TableKind::GwNexthop, 100'000},
              {TableKind::GwEcmpGroup, 10'000},
              {TableKind::GwHost, 1'000'000},
              {TableKind::GwNetAcl, 10'000},
              {TableKind::GwInterface, 50'000},
              {TableKind::GwMeter, 50'000}},
             scale_divisor));
}

CapacityProfile CapacityProfile::zephyrus(uint64_t scale_divisor) {
  // DPU DRAM buys 2x gw_host, 100x gw_net_acl, 10x the rest, plus the
  // affinity table the ASIC-only gateway cannot support at all.
  return CapacityProfile(
      "zephyrus",
      scaled({{TableKind::GwVtep, 10'000},
              {TableKind::GwProtocol, 1'000},
              {TableKind::GwTenant, 100'000},
              {TableKind::GwPolicyRoute, 500'000},
              {TableKind::GwRoute, 1'000'000},
              {TableKind::GwNexthop, 1'000'000},
              {TableKind::GwEcmpGroup, 100'000},
              {TableKind::GwHost, 2'000'000},
              {TableKind::GwNetAcl, 1'000'000},
              {TableKind::GwInterface, 500'000},
              {TableKind::GwMeter, 500'000},
              {TableKind::GwNexthopAffinity, 500'000}},
             scale_divisor));
}

CapacityProfile CapacityProfile::software(uint64_t scale_divisor) {
  // Host DRAM is not the constrained resource; the software gateway gets
  // the larger limits.
  auto caps = zephyrus(scale_divisor).caps();
  return CapacityProfile("software", caps);
}

uint64_t CapacityProfile::cap(TableKind k) const {
  auto it = caps_.find(k);
  if (it == caps_.end())
    throw ConfigError(std::string("table kind ") + table_kind_name(k) +
                      " not supported by profile " + name_);
  return it->second;
}

// --- collision check ---------------------------------------------------------

std::vector<ConflictPair> check_collision(
    const std::vector<LogicalPrefixTable> &tables) {
  struct Item {
    uint64_t start;
    uint64_t end;
    uint8_t len;
    size_t table;
    const PrefixEntry *entry;
  };

  std::vector<Item> items;
  for (size_t t = 0; t < tables.size(); t++) {
    for (const auto &e : tables[t].entries) {
      uint64_t start = e.prefix.addr;
      uint64_t end = e.prefix.addr | (~uint64_t{e.prefix.mask()} & 0xffffffffu);
      items.push_back({start, end, e.prefix.len, t, &e});
    }
  }
  // Prefix intervals are laminar; a sweep with an ancestor stack finds every
  // containment pair without the quadratic scan.
  std::sort(items.begin(), items.end(), [](const Item &a, const Item &b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.len != b.len) return a.len < b.len;
    return a.table < b.table;
  });

  std::vector<ConflictPair> conflicts;
  std::vector<const Item *> stack;
  for (const auto &item : items) {
    while (!stack.empty() && stack.back()->end < item.start) stack.pop_back();
    for (const Item *anc : stack) {
      if (anc->table != item.table) {
        conflicts.push_back({tables[anc->table].id, anc->entry->prefix,
                             tables[item.table].id, item.entry->prefix});
      }
    }
    stack.push_back(&item);
  }
  return conflicts;
}

CoalescePlan coalesce_tables(const std::vector<LogicalPrefixTable> &tables) {
  CoalescePlan plan;
  for (const auto &t : tables) plan.constituents.push_back(t.id);
  plan.conflicts = check_collision(tables);
  if (!plan.conflicts.empty()) {
    plan.verdict = CoalescePlan::Verdict::Refused;
    return plan;
  }
  plan.verdict = CoalescePlan::Verdict::Coalesced;
  plan.table = CoalescedTable::build(tables);
  plan.probe_lengths = plan.table->probe_lengths();
  return plan;
}

// --- Gateway -----------------------------------------------------------------

Gateway::Gateway(size_t dpu_cache_capacity) : asic(&services) {
  dpus.reserve(kNumDpus);
  for (unsigned i = 0; i < kNumDpus; i++)
    dpus.emplace_back(i, dpu_cache_capacity, &services, &vm_nc, &dpu_routes,
                      &acl);
}

// --- ControlPlane --------------------------------------------------------------

InstallOutcome ControlPlane::gate(TableKind kind) {
  uint64_t limit = profile_.cap(kind);  // throws if unsupported
  if (counts_[kind] >= limit) return InstallOutcome::CapacityExceeded;
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_vtep(uint32_t ip) {
  auto g = gate(TableKind::GwVtep);
  if (g != InstallOutcome::Ok) return g;
  if (!gw_->asic.add_vtep(ip)) return InstallOutcome::DuplicateKey;
  count(TableKind::GwVtep);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_protocol_rule(ProtocolRule rule) {
  auto g = gate(TableKind::GwProtocol);
  if (g != InstallOutcome::Ok) return g;
  gw_->asic.add_protocol_rule(rule);
  count(TableKind::GwProtocol);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_service(ServiceObject svc) {
  if (!gw_->services.add(std::move(svc)))
    return InstallOutcome::DuplicateKey;
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_tenant(uint32_t vni,
                                            TenantBinding binding) {
  if (vni > kMaxVni) throw ConfigError("VNI exceeds 24 bits");
  if (!gw_->services.contains(binding.svc_id))
    throw ConfigError("tenant references unregistered service " +
                      std::to_string(binding.svc_id));
  auto g = gate(TableKind::GwTenant);
  if (g != InstallOutcome::Ok) return g;
  if (!gw_->asic.add_tenant(vni, binding)) return InstallOutcome::DuplicateKey;
  count(TableKind::GwTenant);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_policy_route(uint16_t route_table_id,
                                                  const Ipv4Prefix &src_prefix,
                                                  uint32_t instance_id) {
  auto g = gate(TableKind::GwPolicyRoute);
  if (g != InstallOutcome::Ok) return g;
  if (!gw_->asic.add_policy_route(route_table_id, src_prefix, instance_id))
    return InstallOutcome::DuplicateKey;
  count(TableKind::GwPolicyRoute);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_route(uint32_t instance_id,
                                           const Ipv4Prefix &dst_prefix,
                                           RouteTarget target) {
  auto g = gate(TableKind::GwRoute);
  if (g != InstallOutcome::Ok) return g;
  if (!gw_->asic.add_route(instance_id, dst_prefix, target))
    return InstallOutcome::DuplicateKey;
  count(TableKind::GwRoute);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_ecmp_group(EcmpGroup group) {
  auto g = gate(TableKind::GwEcmpGroup);
  if (g != InstallOutcome::Ok) return g;
  if (!gw_->asic.add_ecmp_group(std::move(group)))
    return InstallOutcome::DuplicateKey;
  count(TableKind::GwEcmpGroup);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_nexthop(NexthopEntry nh) {
  auto g = gate(TableKind::GwNexthop);
  if (g != InstallOutcome::Ok) return g;
  if (!gw_->asic.add_nexthop(nh)) return InstallOutcome::DuplicateKey;
  count(TableKind::GwNexthop);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_vm_nc(uint16_t route_table_id,
                                           uint32_t vm_ip,
                                           uint32_t host_address) {
  auto g = gate(TableKind::GwHost);
  if (g != InstallOutcome::Ok) return g;
  if (!gw_->vm_nc.insert(route_table_id, vm_ip, host_address))
    return InstallOutcome::DuplicateKey;
  count(TableKind::GwHost);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_acl(AclRule rule) {
  auto g = gate(TableKind::GwNetAcl);
  if (g != InstallOutcome::Ok) return g;
  gw_->acl.push_back(rule);
  count(TableKind::GwNetAcl);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_dpu_route_entry(
    const std::string &logical_table, const Ipv4Prefix &prefix,
    uint32_t action) {
  auto g = gate(TableKind::GwRoute);
  if (g != InstallOutcome::Ok) return g;
  auto it = std::find_if(staged_dpu_tables_.begin(), staged_dpu_tables_.end(),
                         [&](const auto &t) { return t.id == logical_table; });
  if (it == staged_dpu_tables_.end()) {
    staged_dpu_tables_.push_back({logical_table, {}});
    it = std::prev(staged_dpu_tables_.end());
  }
  for (const auto &e : it->entries)
    if (e.prefix == prefix) return InstallOutcome::DuplicateKey;
  it->entries.push_back({prefix, action});
  count(TableKind::GwRoute);
  return InstallOutcome::Ok;
}

InstallOutcome ControlPlane::install_generic(TableKind kind, uint64_t key) {
  auto g = gate(kind);
  if (g != InstallOutcome::Ok) return g;
  if (!generic_keys_[kind].insert(key).second)
    return InstallOutcome::DuplicateKey;
  count(kind);
  return InstallOutcome::Ok;
}

CoalescePlan ControlPlane::build_dpu_routes() {
  CoalescePlan plan = coalesce_tables(staged_dpu_tables_);
  if (plan.verdict == CoalescePlan::Verdict::Coalesced) {
    gw_->dpu_routes.set_coalesced(*plan.table);
  } else {
    gw_->dpu_routes.set_fallback(staged_dpu_tables_);
  }
  return plan;
}

void ControlPlane::queue_bump_version(uint16_t svc_id) {
  if (!gw_->services.contains(svc_id))
    throw ConfigError("bump_version: unregistered service " +
                      std::to_string(svc_id));
  ControlOp op;
  op.kind = ControlOp::Kind::BumpVersion;
  op.svc_id = svc_id;
  pending_.push_back(op);
}

SetModeOutcome ControlPlane::queue_set_distribution_mode(
    DistributionMode mode) {
  for (const auto &[flow, dpu] : mode.pins)
    if (dpu >= kNumDpus) return SetModeOutcome::InvalidDpuIndex;
  ControlOp op;
  op.kind = ControlOp::Kind::SetDistributionMode;
  op.mode = std::move(mode);
  pending_.push_back(std::move(op));
  return SetModeOutcome::Ok;
}

SetModeOutcome ControlPlane::queue_pin_flow(const FiveTuple &flow,
                                            unsigned dpu_index) {
  if (dpu_index >= kNumDpus) return SetModeOutcome::InvalidDpuIndex;
  ControlOp op;
  op.kind = ControlOp::Kind::PinFlow;
  op.flow = flow;
  op.dpu_index = dpu_index;
  pending_.push_back(op);
  return SetModeOutcome::Ok;
}

void ControlPlane::queue_unpin_flow(const FiveTuple &flow) {
  ControlOp op;
  op.kind = ControlOp::Kind::UnpinFlow;
  op.flow = flow;
  pending_.push_back(op);
}

void ControlPlane::apply_pending() {
  if (pending_.empty()) return;
  for (auto &op : pending_) {
    switch (op.kind) {
      case ControlOp::Kind::BumpVersion:
        gw_->services.bump(op.svc_id);
        break;
      case ControlOp::Kind::SetDistributionMode:
        current_mode_ = std::move(op.mode);
        gw_->asic.set_distribution_mode(current_mode_);
        break;
      case ControlOp::Kind::PinFlow:
        current_mode_.kind = DistributionMode::Kind::Pinned;
        current_mode_.pins[op.flow] = op.dpu_index;
        gw_->asic.set_distribution_mode(current_mode_);
        break;
      case ControlOp::Kind::UnpinFlow:
        current_mode_.pins.erase(op.flow);
        if (current_mode_.pins.empty())
          current_mode_.kind = DistributionMode::Kind::Hash;
        gw_->asic.set_distribution_mode(current_mode_);
        break;
    }
  }
  pending_.clear();
  generation_++;
}

uint64_t ControlPlane::installed_count(TableKind kind) const {
  auto it = counts_.find(kind);
  return it == counts_.end() ? 0 : it->second;
}

}  // namespace gwsim
