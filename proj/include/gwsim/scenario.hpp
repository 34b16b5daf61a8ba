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

#ifndef GWSIM_SCENARIO_HPP_
#define GWSIM_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwsim/control.hpp"
#include "gwsim/placement.hpp"
#include "gwsim/workload.hpp"
#include "json.hpp"

namespace gwsim {

enum class GatewayVariant { SoftwareOnly, TofinoOnly, Zephyrus };

const char *variant_name(GatewayVariant v);
GatewayVariant parse_variant(const std::string &name);

// Per-component service-time model. End-to-end latency is additive along
// the packet's path; all values live in config, never in code.
struct LatencyParams {
  uint64_t tofino_ns = 2'000;       // full folded-switch traversal
  uint64_t dpu_fast_ns = 8'000;     // added by a DPU fast-path transit
  uint64_t slow_extra_ns = 100'000; // added by an ARM slow-path transit
  uint64_t software_base_ns = 0;    // added to software queueing delay
};

struct SoftwareModelParams {
  unsigned cores = 4;
  uint64_t per_core_pps = 2'500'000;
  uint64_t queue_depth = 4'096;
};

struct ProfileConfig {
  std::string name;  // tofino_only | zephyrus | software; empty = by variant
  uint64_t scale_divisor = 1;

  CapacityProfile resolve(GatewayVariant variant) const;
};

struct VtepPool {
  uint32_t base = 0;
  uint32_t count = 0;
};

struct VmNcPool {
  uint16_t route_table_id = 0;
  uint32_t vm_base = 0;
  uint32_t count = 0;
  uint32_t host_base = 0;
  uint32_t host_count = 1;
};

struct TenantConfig {
  uint32_t vni = 0;
  TenantBinding binding;
};

struct PolicyRouteConfig {
  uint16_t route_table_id = 0;
  Ipv4Prefix prefix;
  uint32_t instance = 0;
};

struct RouteConfig {
  uint32_t instance = 0;
  Ipv4Prefix prefix;
  RouteTarget target;
};

struct VmNcConfig {
  uint16_t route_table_id = 0;
  uint32_t vm_ip = 0;
  uint32_t host = 0;
};

struct DpuRouteConfig {
  std::string table;
  Ipv4Prefix prefix;
  uint32_t nexthop = 0;
};

struct TablesConfig {
  std::vector<uint32_t> vteps;
  std::optional<VtepPool> vtep_pool;
  std::vector<ProtocolRule> protocol_rules;
  std::vector<ServiceObject> services;
  std::vector<TenantConfig> tenants;
  std::vector<PolicyRouteConfig> policy_routes;
  std::vector<RouteConfig> routes;
  std::vector<EcmpGroup> ecmp_groups;
  std::vector<NexthopEntry> nexthops;
  std::vector<VmNcConfig> vm_nc;
  std::vector<VmNcPool> vm_nc_pools;
  std::vector<DpuRouteConfig> dpu_routes;
  std::vector<AclRule> acl;
};

struct ControlEventConfig {
  uint64_t at_packet = 0;  // applied at the boundary before this injection
  ControlOp op;
};

struct PlacementConfig {
  uint64_t sram_block_bits = 128'000;
  uint64_t tcam_block_bits = 20'480;
  // Uniform per-stage budget, expanded over 4 pipelines x 12 stages unless
  // explicit budgets are given.
  StageBudget uniform{0, 1, 80, 24, 64, 96, 64};
  std::vector<StageBudget> explicit_budgets;
  std::vector<PlacementTableSpec> tables;

  std::vector<StageBudget> budgets() const;
};

struct ScenarioConfig {
  int schema_version = 1;
  GatewayVariant variant = GatewayVariant::Zephyrus;
  uint64_t seed = 0;
  uint64_t packet_count = 0;
  uint64_t send_rate_pps = 10'000'000;
  uint32_t mtu = 1500;
  uint32_t hash_seed = 0;
  uint64_t cache_capacity = 200'000;
  LatencyParams latency;
  SoftwareModelParams software;
  ProfileConfig profile;
  DistributionMode distribution;
  TablesConfig tables;
  WorkloadSpec workload;
  std::vector<ControlEventConfig> control_events;
  std::optional<PlacementConfig> placement;

  void validate() const;  // throws ConfigError

  static ScenarioConfig from_json(const nlohmann::json &j);
};

ScenarioConfig load_scenario_file(const std::string &path);

// oracle-check input: {"tables": [{"id": ..., "entries": [{"prefix": ...,
// "action": ...}]}]}
std::vector<LogicalPrefixTable> load_rules_file(const std::string &path);

nlohmann::ordered_json coalesce_plan_to_json(const CoalescePlan &plan);

}  // namespace gwsim

#endif  // GWSIM_SCENARIO_HPP_
