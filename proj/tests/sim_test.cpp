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

#include <map>
#include <sstream>

#include "doctest.h"
#include "gwsim/sim.hpp"
#include "scenario_fixtures.hpp"

using namespace gwsim;
using namespace gwsim::testing;

namespace {

// Two tenants on separate services, both fully local, round-robin flows.
ScenarioConfig two_service_scenario(uint64_t flows, uint64_t packets) {
  ScenarioConfig c = local_traffic_scenario(GatewayVariant::Zephyrus, flows,
                                            packets, 100'000);
  c.workload.distribution = WorkloadSpec::Distribution::RoundRobin;
  c.workload.coverage_first = false;
  c.workload.vnis = {100, 200};
  c.tables.services.push_back({2, 1, {}});
  c.tables.tenants.push_back({200, {8, 2}});
  c.tables.policy_routes.push_back({8, Ipv4Prefix::parse("0.0.0.0/0"), 80});
  RouteTarget local;
  local.kind = RouteTarget::Kind::EcmpGroup;
  local.id = 3;
  local.local_vm = true;
  c.tables.routes.push_back({80, Ipv4Prefix::parse("192.168.0.0/16"), local});
  c.tables.vm_nc_pools.push_back(
      {8, parse_ipv4("192.168.0.0"), 1024, parse_ipv4("172.16.0.0"), 64});
  return c;
}

std::string trace_text(const MemoryTraceStore &store) {
  std::ostringstream out;
  for (const auto &rec : store.records())
    out << trace_record_to_json(rec).dump() << "\n";
  return out.str();
}

}  // namespace

TEST_CASE("empty run yields all-zero counters and vacuous conservation") {
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::Zephyrus, 10, 0, 1000);
  RunMetrics m = run_scenario(c);
  CHECK(m.injected == 0);
  CHECK(m.delivered == 0);
  CHECK(m.dropped_total == 0);
  CHECK(m.punted == 0);
  CHECK(m.offload_ratio == 0.0);
  CHECK(m.conservation_holds());
}

TEST_CASE("offload converges: one slow transit per distinct flow") {
  const uint64_t flows = 200, packets = 5000;
  ScenarioConfig c = local_traffic_scenario(GatewayVariant::Zephyrus, flows,
                                            packets, 100'000);
  RunMetrics m = run_scenario(c);
  CHECK(m.injected == packets);
  CHECK(m.dropped_total == 0);
  CHECK(m.path_slow == flows);
  CHECK(m.slow_no_entry == flows);
  CHECK(m.slow_version_mismatch == 0);
  CHECK(m.path_fast_hit == packets - flows);
  CHECK(m.conservation_holds());
  uint64_t installs = 0, evictions = 0;
  for (const auto &d : m.dpus) {
    installs += d.installs;
    evictions += d.evictions;
  }
  CHECK(installs == flows);
  CHECK(evictions == 0);
}

TEST_CASE("tofino-only forwards local traffic entirely in the ASIC") {
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::TofinoOnly, 100, 2000, 100'000);
  RunMetrics m = run_scenario(c);
  CHECK(m.path_asic_only == 2000);
  CHECK(m.path_fast_hit == 0);
  CHECK(m.path_slow == 0);
  CHECK(m.dropped_total == 0);
  CHECK(m.dpus.empty());
  CHECK(m.offload_ratio == 1.0);
}

TEST_CASE("latency is additive and ordered across paths") {
  ScenarioConfig zc =
      local_traffic_scenario(GatewayVariant::Zephyrus, 50, 1000, 100'000);
  RunMetrics zm = run_scenario(zc);
  ScenarioConfig tc =
      local_traffic_scenario(GatewayVariant::TofinoOnly, 50, 1000, 100'000);
  RunMetrics tm = run_scenario(tc);

  // fast hits cost exactly the configured DPU delta over the ASIC-only path
  CHECK(zm.latency_fast_hit.mean_ns() - tm.latency_asic_only.mean_ns() ==
        doctest::Approx(static_cast<double>(zc.latency.dpu_fast_ns)));
  // slow > fast > asic-only
  CHECK(zm.latency_slow.p99_ns() > zm.latency_fast_hit.p99_ns());
  CHECK(zm.latency_fast_hit.mean_ns() > tm.latency_asic_only.mean_ns());
  CHECK(zm.latency_slow.mean_ns() > zm.latency_fast_hit.mean_ns());
}

TEST_CASE("software variant at low rate delivers everything") {
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::SoftwareOnly, 64, 5000, 0);
  c.send_rate_pps = 1'000'000;  // well under 4 cores x 2.5 Mpps
  c.workload.distribution = WorkloadSpec::Distribution::Uniform;
  RunMetrics m = run_scenario(c);
  CHECK(m.path_software == 5000);
  CHECK(m.dropped_total == 0);
  CHECK(m.offload_ratio == 0.0);
  CHECK(m.sw_cores.size() == 4);
  CHECK(m.conservation_holds());
}

TEST_CASE("traces expose the exact per-packet journey") {
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::Zephyrus, 4, 40, 100'000);
  c.workload.distribution = WorkloadSpec::Distribution::RoundRobin;
  c.workload.coverage_first = false;
  // flow mix: locals plus one cross-region and one control flow
  c.workload.local_fraction = 0.5;
  c.workload.cross_fraction = 0.25;
  c.workload.control_fraction = 0.25;

  MemoryTraceStore store;
  RunMetrics m = run_scenario(c, &store);
  REQUIRE(store.size() == 40);

  SUBCASE("asic-only packets never visit a DPU") {
    bool saw_asic_only = false;
    for (const auto &rec : store.records()) {
      if (rec.disposition != Disposition::AsicOnly) continue;
      saw_asic_only = true;
      for (const auto &hop : rec.hops)
        CHECK(hop.component.rfind("dpu", 0) != 0);
    }
    CHECK(saw_asic_only);
  }

  SUBCASE("first packet of a flow goes slow, the second hits the cache") {
    // trace 0 and 4 are the same round-robin flow (4 flows)
    const TraceRecord &first = store.query(0);
    CHECK(first.disposition == Disposition::SlowPath);
    bool has_slow_hop = false;
    for (const auto &hop : first.hops)
      if (hop.action.rfind("slow_path", 0) == 0) has_slow_hop = true;
    CHECK(has_slow_hop);

    const TraceRecord &second = store.query(4);
    CHECK(second.disposition == Disposition::FastHit);
    bool has_hit_hop = false;
    for (const auto &hop : second.hops)
      if (hop.action.rfind("cache_hit", 0) == 0) has_hit_hop = true;
    CHECK(has_hit_hop);
  }

  SUBCASE("punted control packets stop at the cpu") {
    bool saw_punt = false;
    for (const auto &rec : store.records()) {
      if (rec.disposition != Disposition::PuntToCpu) continue;
      saw_punt = true;
      CHECK(rec.hops.back().component == "cpu");
    }
    CHECK(saw_punt);
    CHECK(m.punted > 0);
  }

  SUBCASE("timestamps are non-decreasing and the stage order is sane") {
    auto order = [](const std::string &c) {
      if (c.rfind("asic_pre", 0) == 0) return 0;
      if (c.rfind("dpu", 0) == 0 && c.find(".arm") == std::string::npos)
        return 1;
      if (c.find(".arm") != std::string::npos) return 2;
      if (c.rfind("asic_post", 0) == 0) return 3;
      return 4;  // cpu / sw
    };
    for (const auto &rec : store.records()) {
      for (size_t i = 1; i < rec.hops.size(); i++) {
        CHECK(rec.hops[i].t_ns >= rec.hops[i - 1].t_ns);
        if (order(rec.hops[i].component) < 4 &&
            order(rec.hops[i - 1].component) < 4)
          CHECK(order(rec.hops[i].component) >=
                order(rec.hops[i - 1].component));
      }
    }
  }

  SUBCASE("every packet gets exactly one final disposition") {
    std::map<Disposition, uint64_t> finals;
    for (const auto &rec : store.records()) finals[rec.disposition]++;
    uint64_t total = 0;
    for (const auto &[d, n] : finals) total += n;
    CHECK(total == 40);
    // hardware variants only ever produce the five architectural finals
    CHECK(finals.count(Disposition::Software) == 0);
  }

  SUBCASE("unknown trace ids throw") {
    CHECK_THROWS_AS(store.query(999'999), UnknownTraceId);
  }
}

TEST_CASE("dropped packets carry the originating stage in the trace") {
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::Zephyrus, 4, 8, 100'000);
  c.workload.distribution = WorkloadSpec::Distribution::RoundRobin;
  c.workload.coverage_first = false;
  // deny one destination at the DPU ACL: its flow drops on the slow path
  AclRule deny;
  deny.action = AclRule::Action::Deny;
  deny.dst = Ipv4Prefix::parse("192.168.0.2/32");
  c.tables.acl.push_back(deny);

  MemoryTraceStore store;
  RunMetrics m = run_scenario(c, &store);
  CHECK(m.dropped_total == 2);  // flow 2, both passes
  CHECK(m.dropped_by_reason.at("acl_deny") == 2);
  bool saw_drop = false;
  for (const auto &rec : store.records()) {
    if (rec.disposition != Disposition::Drop) continue;
    saw_drop = true;
    REQUIRE(rec.drop_reason.has_value());
    CHECK(*rec.drop_reason == DropReason::AclDeny);
    CHECK(rec.hops.back().component.find(".arm") != std::string::npos);
  }
  CHECK(saw_drop);
  CHECK(m.conservation_holds());
}

TEST_CASE("identical configs and seeds give byte-identical outputs") {
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::Zephyrus, 500, 20'000, 100'000);
  c.workload.cross_fraction = 0.2;
  c.workload.local_fraction = 0.7;
  c.workload.control_fraction = 0.1;

  MemoryTraceStore ta, tb;
  RunMetrics a = run_scenario(c, &ta);
  RunMetrics b = run_scenario(c, &tb);
  CHECK(a == b);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(trace_text(ta) == trace_text(tb));

  ScenarioConfig c2 = c;
  c2.seed = c.seed + 1;
  RunMetrics d = run_scenario(c2);
  CHECK(a.to_json().dump() != d.to_json().dump());
}

TEST_CASE("version bump detours each affected flow exactly once") {
  const uint64_t flows = 100;  // 50 per service
  const uint64_t packets = 4 * flows;
  ScenarioConfig c = two_service_scenario(flows, packets);
  c.control_events.push_back({2 * flows, [] {
                                ControlOp op;
                                op.kind = ControlOp::Kind::BumpVersion;
                                op.svc_id = 1;
                                return op;
                              }()});

  RunMetrics m = run_scenario(c);
  CHECK(m.dropped_total == 0);
  CHECK(m.slow_no_entry == flows);            // one first-transit per flow
  CHECK(m.slow_version_mismatch == flows / 2);  // only service 1 flows detour
  CHECK(m.slow_by_service.at(1) == flows);      // 50 initial + 50 post-bump
  CHECK(m.slow_by_service.at(2) == flows / 2);  // untouched by the bump
  CHECK(m.path_fast_hit == packets - m.path_slow);
  CHECK(m.conservation_holds());
}

TEST_CASE("pinning a flow moves it to the chosen dpu and back") {
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::Zephyrus, 1, 30, 1000);
  c.workload.distribution = WorkloadSpec::Distribution::RoundRobin;
  c.workload.coverage_first = false;

  WorkloadGenerator probe(c.workload, c.seed, c.send_rate_pps);
  FiveTuple tuple = probe.tuple_of(0);
  unsigned hashed = five_tuple_hash(tuple) % kNumDpus;
  unsigned pinned = (hashed + 2) % kNumDpus;

  ControlOp pin;
  pin.kind = ControlOp::Kind::PinFlow;
  pin.flow = tuple;
  pin.dpu_index = pinned;
  c.control_events.push_back({10, pin});
  ControlOp unpin;
  unpin.kind = ControlOp::Kind::UnpinFlow;
  unpin.flow = tuple;
  c.control_events.push_back({20, unpin});

  RunMetrics m = run_scenario(c);
  CHECK(m.dpus[hashed].packets == 20);  // before the pin and after the unpin
  CHECK(m.dpus[pinned].packets == 10);
}

TEST_CASE("undersized caches evict, re-enter the slow path and stay bounded") {
  const uint64_t flows = 500, packets = 20'000;
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::Zephyrus, flows, packets, 64);
  RunMetrics m = run_scenario(c);

  uint64_t evictions = 0;
  for (const auto &d : m.dpus) {
    evictions += d.evictions;
    CHECK(d.occupancy <= d.capacity);
  }
  CHECK(evictions > 0);
  // install and evict events surface in the trace stream
  MemoryTraceStore store;
  RunMetrics traced = run_scenario(c, &store);
  CHECK(traced == m);
  uint64_t install_hops = 0, evict_hops = 0;
  for (const auto &rec : store.records()) {
    for (const auto &hop : rec.hops) {
      if (hop.action == "offload_install") install_hops++;
      if (hop.action.rfind("offload_evict", 0) == 0) evict_hops++;
    }
  }
  CHECK(install_hops == m.path_slow);
  CHECK(evict_hops == evictions);
  // evicted flows must retransit the slow path: strictly more than one
  // transit per distinct flow
  CHECK(m.path_slow > flows);
  CHECK(m.slow_no_entry == m.path_slow);  // all misses are genuine absences
  CHECK(m.dropped_total == 0);
  CHECK(m.conservation_holds());
}

TEST_CASE("conservation holds under a mixed workload with drops") {
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::Zephyrus, 300, 6000, 64);
  c.workload.local_fraction = 0.6;
  c.workload.cross_fraction = 0.3;
  c.workload.control_fraction = 0.1;
  AclRule deny;
  deny.action = AclRule::Action::Deny;
  deny.src = Ipv4Prefix::parse("10.0.0.64/26");
  c.tables.acl.push_back(deny);

  RunMetrics m = run_scenario(c);
  CHECK(m.injected == 6000);
  CHECK(m.dropped_total > 0);
  CHECK(m.punted > 0);
  CHECK(m.conservation_holds());
}

TEST_CASE("rejected run configurations fail before execution") {
  ScenarioConfig c =
      local_traffic_scenario(GatewayVariant::Zephyrus, 10, 100, 1000);
  c.workload.payload_len = 9000;  // exceeds mtu
  CHECK_THROWS_AS(Simulation{c}, ConfigError);

  ScenarioConfig dup = local_traffic_scenario(GatewayVariant::Zephyrus, 10,
                                              100, 1000);
  dup.tables.tenants.push_back({100, {9, 1}});  // duplicate VNI
  CHECK_THROWS_AS(Simulation{dup}, ConfigError);
}
