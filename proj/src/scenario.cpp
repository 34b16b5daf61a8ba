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

#include "gwsim/scenario.hpp"

#include <algorithm>
#include <fstream>

namespace gwsim {

const char *variant_name(GatewayVariant v) {
  switch (v) {
    case GatewayVariant::SoftwareOnly: return "software_only";
    case GatewayVariant::TofinoOnly: return "tofino_only";
    case GatewayVariant::Zephyrus: return "zephyrus";
  }
  return "unknown";
}

GatewayVariant parse_variant(const std::string &name) {
  if (name == "software_only") return GatewayVariant::SoftwareOnly;
  if (name == "tofino_only") return GatewayVariant::TofinoOnly;
  if (name == "zephyrus") return GatewayVariant::Zephyrus;
  throw ConfigError("unknown gateway variant: " + name);
}

CapacityProfile ProfileConfig::resolve(GatewayVariant variant) const {
  std::string effective = name;
  if (effective.empty()) {
    switch (variant) {
      case GatewayVariant::SoftwareOnly: effective = "software"; break;
      case GatewayVariant::TofinoOnly: effective = "tofino_only"; break;
      case GatewayVariant::Zephyrus: effective = "zephyrus"; break;
    }
  }
  if (effective == "tofino_only")
    return CapacityProfile::tofino_only(scale_divisor);
  if (effective == "zephyrus") return CapacityProfile::zephyrus(scale_divisor);
  if (effective == "software") return CapacityProfile::software(scale_divisor);
  throw ConfigError("unknown capacity profile: " + effective);
}

std::vector<StageBudget> PlacementConfig::budgets() const {
  if (!explicit_budgets.empty()) return explicit_budgets;
  std::vector<StageBudget> out;
  for (unsigned p = 0; p < kNumPipelines; p++) {
    for (unsigned s = 1; s <= kStagesPerPipeline; s++) {
      StageBudget b = uniform;
      b.pipeline = p;
      b.stage = s;
      out.push_back(b);
    }
  }
  return out;
}

void ScenarioConfig::validate() const {
  if (schema_version != 1)
    throw ConfigError("unsupported schema_version " +
                      std::to_string(schema_version));
  if (send_rate_pps == 0) throw ConfigError("send_rate_pps must be > 0");
  if (mtu == 0) throw ConfigError("mtu must be > 0");
  workload.validate();
  if (workload.payload_len > mtu)
    throw ConfigError("workload payload exceeds MTU");
  for (const auto &t : tables.tenants)
    if (t.vni > kMaxVni) throw ConfigError("tenant VNI exceeds 24 bits");
  for (const auto &e : control_events) {
    if (e.op.kind == ControlOp::Kind::PinFlow && e.op.dpu_index >= kNumDpus)
      throw ConfigError("control event pins to nonexistent DPU");
  }
}

namespace {

using nlohmann::json;

uint64_t get_u64(const json &j, const char *key, uint64_t dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : it->get<uint64_t>();
}

double get_f64(const json &j, const char *key, double dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : it->get<double>();
}

bool get_bool(const json &j, const char *key, bool dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : it->get<bool>();
}

std::string get_str(const json &j, const char *key, const std::string &dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : it->get<std::string>();
}

uint32_t ip_field(const json &j, const char *key) {
  return parse_ipv4(j.at(key).get<std::string>());
}

uint32_t ip_field_or(const json &j, const char *key, uint32_t dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : parse_ipv4(it->get<std::string>());
}

FiveTuple tuple_from_json(const json &j) {
  FiveTuple t;
  t.src_ip = ip_field(j, "src_ip");
  t.dst_ip = ip_field(j, "dst_ip");
  t.src_port = static_cast<uint16_t>(get_u64(j, "src_port", 0));
  t.dst_port = static_cast<uint16_t>(get_u64(j, "dst_port", 0));
  t.proto = static_cast<uint8_t>(get_u64(j, "proto", kProtoTcp));
  if (!t.ports_valid())
    throw ConfigError("five-tuple carries ports for a portless protocol");
  return t;
}

RouteTarget target_from_json(const json &j) {
  RouteTarget t;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "nexthop") {
    t.kind = RouteTarget::Kind::Nexthop;
  } else if (kind == "ecmp") {
    t.kind = RouteTarget::Kind::EcmpGroup;
  } else {
    throw ConfigError("route target kind must be nexthop or ecmp");
  }
  t.id = static_cast<uint32_t>(j.at("id").get<uint64_t>());
  t.local_vm = get_bool(j, "local", false);
  return t;
}

AclRule acl_from_json(const json &j) {
  AclRule r;
  std::string action = j.at("action").get<std::string>();
  if (action == "allow") {
    r.action = AclRule::Action::Allow;
  } else if (action == "deny") {
    r.action = AclRule::Action::Deny;
  } else {
    throw ConfigError("acl action must be allow or deny");
  }
  if (j.contains("vni")) r.vni = j.at("vni").get<uint32_t>();
  if (j.contains("src"))
    r.src = Ipv4Prefix::parse(j.at("src").get<std::string>());
  if (j.contains("dst"))
    r.dst = Ipv4Prefix::parse(j.at("dst").get<std::string>());
  if (j.contains("proto")) r.proto = j.at("proto").get<uint8_t>();
  if (j.contains("src_port")) r.src_port = j.at("src_port").get<uint16_t>();
  if (j.contains("dst_port")) r.dst_port = j.at("dst_port").get<uint16_t>();
  return r;
}

WorkloadSpec workload_from_json(const json &j) {
  WorkloadSpec w;
  w.flows = get_u64(j, "flows", 1);
  std::string dist = get_str(j, "distribution", "uniform");
  if (dist == "uniform") {
    w.distribution = WorkloadSpec::Distribution::Uniform;
  } else if (dist == "zipf") {
    w.distribution = WorkloadSpec::Distribution::Zipf;
  } else if (dist == "round_robin") {
    w.distribution = WorkloadSpec::Distribution::RoundRobin;
  } else {
    throw ConfigError("unknown flow distribution: " + dist);
  }
  w.zipf_s = get_f64(j, "zipf_s", 1.0);
  if (j.contains("locality")) {
    const auto &loc = j.at("locality");
    w.local_fraction = get_f64(loc, "local", 1.0);
    w.cross_fraction = get_f64(loc, "cross", 0.0);
    w.control_fraction = get_f64(loc, "control", 0.0);
  }
  w.coverage_first = get_bool(j, "coverage_first", false);
  if (j.contains("vnis")) w.vnis = j.at("vnis").get<std::vector<uint32_t>>();
  w.src_base = ip_field_or(j, "src_base", w.src_base);
  w.local_dst_base = ip_field_or(j, "local_dst_base", w.local_dst_base);
  w.local_dst_count = static_cast<uint32_t>(
      get_u64(j, "local_dst_count", w.local_dst_count));
  w.cross_dst_base = ip_field_or(j, "cross_dst_base", w.cross_dst_base);
  w.cross_dst_count = static_cast<uint32_t>(
      get_u64(j, "cross_dst_count", w.cross_dst_count));
  w.vtep_base = ip_field_or(j, "vtep_base", w.vtep_base);
  w.vtep_count =
      static_cast<uint32_t>(get_u64(j, "vtep_count", w.vtep_count));
  w.gateway_ip = ip_field_or(j, "gateway_ip", w.gateway_ip);
  w.payload_len =
      static_cast<uint32_t>(get_u64(j, "payload_len", w.payload_len));
  return w;
}

PlacementConfig placement_from_json(const json &j) {
  PlacementConfig p;
  p.sram_block_bits = get_u64(j, "sram_block_bits", p.sram_block_bits);
  p.tcam_block_bits = get_u64(j, "tcam_block_bits", p.tcam_block_bits);
  if (j.contains("stage_budget")) {
    const auto &b = j.at("stage_budget");
    p.uniform.sram_blocks =
        static_cast<uint32_t>(get_u64(b, "sram_blocks", 80));
    p.uniform.tcam_blocks =
        static_cast<uint32_t>(get_u64(b, "tcam_blocks", 24));
    p.uniform.phv8 = static_cast<uint32_t>(get_u64(b, "phv8", 64));
    p.uniform.phv16 = static_cast<uint32_t>(get_u64(b, "phv16", 96));
    p.uniform.phv32 = static_cast<uint32_t>(get_u64(b, "phv32", 64));
  }
  for (const auto &t : j.value("tables", json::array())) {
    PlacementTableSpec spec;
    spec.id = t.at("id").get<std::string>();
    std::string match = get_str(t, "match", "exact");
    if (match == "exact") {
      spec.match = MatchKind::Exact;
    } else if (match == "lpm") {
      spec.match = MatchKind::Lpm;
    } else {
      throw ConfigError("placement table match must be exact or lpm");
    }
    spec.entries = t.at("entries").get<uint64_t>();
    spec.bits_per_entry = t.at("bits_per_entry").get<uint32_t>();
    if (t.contains("deps"))
      spec.deps = t.at("deps").get<std::vector<std::string>>();
    if (t.contains("phv")) {
      const auto &phv = t.at("phv");
      spec.phv.b8 = static_cast<uint32_t>(get_u64(phv, "b8", 0));
      spec.phv.b16 = static_cast<uint32_t>(get_u64(phv, "b16", 0));
      spec.phv.b32 = static_cast<uint32_t>(get_u64(phv, "b32", 0));
    }
    p.tables.push_back(std::move(spec));
  }
  return p;
}

ControlOp control_op_from_json(const json &j) {
  ControlOp op;
  std::string kind = j.at("op").get<std::string>();
  if (kind == "bump_version") {
    op.kind = ControlOp::Kind::BumpVersion;
    op.svc_id = j.at("svc_id").get<uint16_t>();
  } else if (kind == "pin_flow") {
    op.kind = ControlOp::Kind::PinFlow;
    op.flow = tuple_from_json(j.at("flow"));
    op.dpu_index = j.at("dpu").get<unsigned>();
  } else if (kind == "unpin_flow") {
    op.kind = ControlOp::Kind::UnpinFlow;
    op.flow = tuple_from_json(j.at("flow"));
  } else if (kind == "set_mode_hash") {
    op.kind = ControlOp::Kind::SetDistributionMode;
    op.mode.kind = DistributionMode::Kind::Hash;
  } else {
    throw ConfigError("unknown control op: " + kind);
  }
  return op;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json &j) {
  ScenarioConfig c;
  c.schema_version = static_cast<int>(get_u64(j, "schema_version", 0));
  c.variant = parse_variant(j.at("variant").get<std::string>());
  c.seed = get_u64(j, "seed", 0);
  c.packet_count = get_u64(j, "packet_count", 0);
  c.send_rate_pps = get_u64(j, "send_rate_pps", c.send_rate_pps);
  c.mtu = static_cast<uint32_t>(get_u64(j, "mtu", c.mtu));
  c.hash_seed = static_cast<uint32_t>(get_u64(j, "hash_seed", 0));
  c.cache_capacity = get_u64(j, "cache_capacity", c.cache_capacity);

  if (j.contains("latency_ns")) {
    const auto &l = j.at("latency_ns");
    c.latency.tofino_ns = get_u64(l, "tofino", c.latency.tofino_ns);
    c.latency.dpu_fast_ns = get_u64(l, "dpu_fast", c.latency.dpu_fast_ns);
    c.latency.slow_extra_ns =
        get_u64(l, "slow_extra", c.latency.slow_extra_ns);
    c.latency.software_base_ns =
        get_u64(l, "software_base", c.latency.software_base_ns);
  }
  if (j.contains("software_model")) {
    const auto &s = j.at("software_model");
    c.software.cores =
        static_cast<unsigned>(get_u64(s, "cores", c.software.cores));
    c.software.per_core_pps =
        get_u64(s, "per_core_pps", c.software.per_core_pps);
    c.software.queue_depth = get_u64(s, "queue_depth", c.software.queue_depth);
  }
  if (j.contains("capacity_profile")) {
    const auto &p = j.at("capacity_profile");
    c.profile.name = get_str(p, "name", "");
    c.profile.scale_divisor = get_u64(p, "scale_divisor", 1);
  }
  if (j.contains("distribution_mode")) {
    const auto &d = j.at("distribution_mode");
    std::string mode = get_str(d, "mode", "hash");
    if (mode == "hash") {
      c.distribution.kind = DistributionMode::Kind::Hash;
    } else if (mode == "pinned") {
      c.distribution.kind = DistributionMode::Kind::Pinned;
      for (const auto &pin : d.value("pins", json::array())) {
        unsigned dpu = pin.at("dpu").get<unsigned>();
        if (dpu >= kNumDpus)
          throw ConfigError("pin references nonexistent DPU");
        c.distribution.pins[tuple_from_json(pin.at("flow"))] = dpu;
      }
    } else {
      throw ConfigError("distribution mode must be hash or pinned");
    }
  }

  if (j.contains("tables")) {
    const auto &t = j.at("tables");
    for (const auto &v : t.value("vteps", json::array()))
      c.tables.vteps.push_back(parse_ipv4(v.get<std::string>()));
    if (t.contains("vtep_pool")) {
      VtepPool pool;
      pool.base = ip_field(t.at("vtep_pool"), "base");
      pool.count =
          static_cast<uint32_t>(t.at("vtep_pool").at("count").get<uint64_t>());
      c.tables.vtep_pool = pool;
    }
    for (const auto &r : t.value("protocol_rules", json::array())) {
      ProtocolRule rule;
      rule.proto = r.at("proto").get<uint8_t>();
      rule.dst_port = static_cast<uint16_t>(get_u64(r, "dst_port", 0));
      c.tables.protocol_rules.push_back(rule);
    }
    for (const auto &s : t.value("services", json::array())) {
      ServiceObject svc;
      svc.svc_id = s.at("svc_id").get<uint16_t>();
      svc.version = static_cast<uint16_t>(get_u64(s, "version", 1));
      c.tables.services.push_back(std::move(svc));
    }
    for (const auto &x : t.value("tenants", json::array())) {
      TenantConfig tc;
      tc.vni = x.at("vni").get<uint32_t>();
      tc.binding.route_table_id = x.at("route_table_id").get<uint16_t>();
      tc.binding.svc_id = x.at("svc_id").get<uint16_t>();
      c.tables.tenants.push_back(tc);
    }
    for (const auto &x : t.value("policy_routes", json::array())) {
      PolicyRouteConfig pr;
      pr.route_table_id = x.at("route_table_id").get<uint16_t>();
      pr.prefix = Ipv4Prefix::parse(x.at("prefix").get<std::string>());
      pr.instance = x.at("instance").get<uint32_t>();
      c.tables.policy_routes.push_back(pr);
    }
    for (const auto &x : t.value("routes", json::array())) {
      RouteConfig rc;
      rc.instance = x.at("instance").get<uint32_t>();
      rc.prefix = Ipv4Prefix::parse(x.at("prefix").get<std::string>());
      rc.target = target_from_json(x.at("target"));
      c.tables.routes.push_back(rc);
    }
    for (const auto &x : t.value("ecmp_groups", json::array())) {
      EcmpGroup g;
      g.group_id = x.at("id").get<uint32_t>();
      g.members = x.at("members").get<std::vector<uint32_t>>();
      c.tables.ecmp_groups.push_back(std::move(g));
    }
    for (const auto &x : t.value("nexthops", json::array())) {
      NexthopEntry nh;
      nh.nexthop_index = x.at("id").get<uint32_t>();
      nh.out_port = static_cast<uint32_t>(get_u64(x, "port", 0));
      nh.new_outer_dst_ip = ip_field_or(x, "outer_dst", 0);
      nh.vni = static_cast<uint32_t>(get_u64(x, "vni", 0));
      c.tables.nexthops.push_back(nh);
    }
    for (const auto &x : t.value("vm_nc", json::array())) {
      VmNcConfig v;
      v.route_table_id = x.at("route_table_id").get<uint16_t>();
      v.vm_ip = ip_field(x, "vm_ip");
      v.host = ip_field(x, "host");
      c.tables.vm_nc.push_back(v);
    }
    for (const auto &x : t.value("vm_nc_pools", json::array())) {
      VmNcPool pool;
      pool.route_table_id = x.at("route_table_id").get<uint16_t>();
      pool.vm_base = ip_field(x, "vm_base");
      pool.count = static_cast<uint32_t>(x.at("count").get<uint64_t>());
      pool.host_base = ip_field(x, "host_base");
      pool.host_count =
          static_cast<uint32_t>(get_u64(x, "host_count", 1));
      c.tables.vm_nc_pools.push_back(pool);
    }
    for (const auto &x : t.value("dpu_routes", json::array())) {
      DpuRouteConfig d;
      d.table = x.at("table").get<std::string>();
      d.prefix = Ipv4Prefix::parse(x.at("prefix").get<std::string>());
      d.nexthop = x.at("nexthop").get<uint32_t>();
      c.tables.dpu_routes.push_back(std::move(d));
    }
    for (const auto &x : t.value("acl", json::array()))
      c.tables.acl.push_back(acl_from_json(x));
  }

  if (j.contains("workload")) c.workload = workload_from_json(j.at("workload"));
  for (const auto &e : j.value("control_events", json::array())) {
    ControlEventConfig ev;
    ev.at_packet = e.at("at_packet").get<uint64_t>();
    ev.op = control_op_from_json(e);
    c.control_events.push_back(std::move(ev));
  }
  if (j.contains("placement"))
    c.placement = placement_from_json(j.at("placement"));

  c.validate();
  return c;
}

ScenarioConfig load_scenario_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("scenario " + path + ": " + e.what());
  }
  try {
    return ScenarioConfig::from_json(j);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("scenario " + path + ": " + e.what());
  }
}

std::vector<LogicalPrefixTable> load_rules_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rules file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("rules " + path + ": " + e.what());
  }
  std::vector<LogicalPrefixTable> tables;
  try {
    for (const auto &t : j.at("tables")) {
      LogicalPrefixTable table;
      table.id = t.at("id").get<std::string>();
      for (const auto &e : t.at("entries")) {
        PrefixEntry entry;
        entry.prefix = Ipv4Prefix::parse(e.at("prefix").get<std::string>());
        entry.action = static_cast<uint32_t>(get_u64(e, "action", 0));
        table.entries.push_back(entry);
      }
      tables.push_back(std::move(table));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("rules " + path + ": " + e.what());
  }
  return tables;
}

nlohmann::ordered_json coalesce_plan_to_json(const CoalescePlan &plan) {
  nlohmann::ordered_json j;
  j["verdict"] = plan.verdict == CoalescePlan::Verdict::Coalesced
                     ? "coalesced"
                     : "refused";
  j["constituents"] = plan.constituents;
  j["probe_lengths"] = plan.probe_lengths;
  nlohmann::ordered_json conflicts = nlohmann::ordered_json::array();
  for (const auto &c : plan.conflicts) {
    conflicts.push_back({{"table_a", c.table_a},
                         {"prefix_a", c.prefix_a.str()},
                         {"table_b", c.table_b},
                         {"prefix_b", c.prefix_b.str()}});
  }
  j["conflicts"] = std::move(conflicts);
  return j;
}

}  // namespace gwsim
