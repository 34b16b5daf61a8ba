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

// End-to-end acceptance suite. Every check prints one PASS/FAIL line; the
// process exits nonzero if any fail. Expected wall time: well under two
// minutes on one core.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "gwsim/sim.hpp"
#include "oracles.hpp"
#include "scenario_fixtures.hpp"

using namespace gwsim;
using namespace gwsim::testing;

namespace {

int g_failures = 0;
std::vector<std::pair<std::string, RunMetrics>> g_runs;

void report(const std::string &name, bool pass, const std::string &detail) {
  std::printf("ACCEPTANCE %-28s %s  (%s)\n", name.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) g_failures++;
}

RunMetrics tracked_run(const std::string &name, const ScenarioConfig &cfg,
                       TraceSink *sink = nullptr) {
  RunMetrics m = run_scenario(cfg, sink);
  g_runs.emplace_back(name, m);
  return m;
}

// --- criterion 1: >99% hardware offloading -------------------------------

void criterion_offload_ratio() {
  const uint64_t flows = 100'000, packets = 10'000'000;
  ScenarioConfig cfg = local_traffic_scenario(GatewayVariant::Zephyrus, flows,
                                              packets, 200'000, 7);
  RunMetrics m = tracked_run("offload", cfg);
  bool pass = m.offload_ratio >= 0.99 && m.path_slow == flows &&
              m.dropped_total == 0;
  std::ostringstream d;
  d << "offload=" << m.offload_ratio << ", slow_transits=" << m.path_slow
    << "/" << flows << ", dropped=" << m.dropped_total;
  report("1-offload-ratio", pass, d.str());
}

// --- criterion 2: software loss >5%, hardware zero loss -------------------

void criterion_loss_contrast() {
  const uint64_t flows = 100'000, packets = 10'000'000;

  ScenarioConfig sw = local_traffic_scenario(GatewayVariant::SoftwareOnly,
                                             flows, packets, 200'000, 7);
  sw.software = {4, 2'500'000, 4'096};  // documented calibrated defaults
  RunMetrics sm = tracked_run("loss-software", sw);
  double sw_loss =
      static_cast<double>(sm.dropped_total) / static_cast<double>(sm.injected);

  ScenarioConfig tf = local_traffic_scenario(GatewayVariant::TofinoOnly, flows,
                                             packets, 200'000, 7);
  RunMetrics tm = tracked_run("loss-tofino", tf);

  ScenarioConfig zp = local_traffic_scenario(GatewayVariant::Zephyrus, flows,
                                             packets, 200'000, 7);
  RunMetrics zm = tracked_run("loss-zephyrus", zp);

  bool pass = sw_loss > 0.05 && tm.dropped_total == 0 && zm.dropped_total == 0;
  std::ostringstream d;
  d << "software_loss=" << sw_loss << " (>0.05), tofino_dropped="
    << tm.dropped_total << ", zephyrus_dropped=" << zm.dropped_total;
  report("2-loss-contrast", pass, d.str());
}

// --- criterion 3: 8us fast-path delta, slow p99 above fast p99 ------------

void criterion_latency_delta() {
  const uint64_t flows = 10'000, packets = 1'000'000;
  ScenarioConfig zc = local_traffic_scenario(GatewayVariant::Zephyrus, flows,
                                             packets, 100'000, 7);
  RunMetrics zm = tracked_run("latency-zephyrus", zc);
  ScenarioConfig tc = local_traffic_scenario(GatewayVariant::TofinoOnly, flows,
                                             packets, 100'000, 7);
  RunMetrics tm = tracked_run("latency-tofino", tc);

  double delta =
      zm.latency_fast_hit.mean_ns() - tm.latency_asic_only.mean_ns();
  double target = static_cast<double>(zc.latency.dpu_fast_ns);  // 8000 ns
  bool delta_ok = std::abs(delta - target) <= 0.01 * target;
  bool p99_ok = zm.latency_slow.p99_ns() > zm.latency_fast_hit.p99_ns();
  std::ostringstream d;
  d << "delta_ns=" << delta << " (target " << target
    << " +-1%), p99_slow=" << zm.latency_slow.p99_ns()
    << " > p99_fast=" << zm.latency_fast_hit.p99_ns();
  report("3-latency-delta", delta_ok && p99_ok, d.str());
}

// --- criterion 4: SRAM hotspot reproduction -------------------------------

void criterion_sram_hotspot() {
  auto budgets = uniform_budgets();

  auto base_tables = baseline_placement_tables();
  auto base_plan =
      place_tables(base_tables, budgets, kSramBlockBits, kTcamBlockBits);
  auto base = compute_utilization(base_plan, base_tables, budgets);
  double p3_mean = base.pipelines.at(3).sram_mean_pct;
  unsigned full = 0;
  for (unsigned s = 1; s <= kStagesPerPipeline; s++)
    if (base.stages.at({3, s}).sram_pct >= 100.0) full++;
  bool baseline_ok = std::abs(p3_mean - 97.4) <= 1.0 && full >= 5;

  auto zeph_tables = zephyrus_placement_tables();
  auto zeph_plan =
      place_tables(zeph_tables, budgets, kSramBlockBits, kTcamBlockBits);
  auto zeph = compute_utilization(zeph_plan, zeph_tables, budgets);
  bool zeph_ok = true;
  double worst = 0;
  for (unsigned p = 0; p < kNumPipelines; p++) {
    double f = zeph.pipelines.at(p).sram_saturation_fraction;
    worst = std::max(worst, f);
    if (f >= 0.60) zeph_ok = false;
  }

  std::ostringstream d;
  d << "pipe3_mean=" << p3_mean << "% (97.4+-1.0), stages_at_100=" << full
    << " (>=5), worst_saturation=" << worst << " (<0.60)";
  report("4-sram-hotspot", baseline_ok && zeph_ok, d.str());
}

// --- criterion 5: table capacity contrast at 1:100 scale ------------------

void criterion_table_capacity() {
  Gateway gw_t(16), gw_z(16);
  ControlPlane tofino(&gw_t, CapacityProfile::tofino_only(100));
  ControlPlane zeph(&gw_z, CapacityProfile::zephyrus(100));

  bool pass = true;
  // gw_host: Zephyrus takes 20,000; Tofino-only rejects the 10,001st
  for (uint32_t i = 0; i < 20'000 && pass; i++)
    pass = zeph.install_vm_nc(1, i, 7) == InstallOutcome::Ok;
  for (uint32_t i = 0; i < 10'000 && pass; i++)
    pass = tofino.install_vm_nc(1, i, 7) == InstallOutcome::Ok;
  bool host_reject =
      tofino.install_vm_nc(1, 10'000, 7) == InstallOutcome::CapacityExceeded;
  bool zeph_full =
      zeph.install_vm_nc(1, 20'000, 7) == InstallOutcome::CapacityExceeded;

  // gw_net_acl: the 100x ratio, enforced the same way
  uint64_t acl_t = tofino.profile().cap(TableKind::GwNetAcl);
  uint64_t acl_z = zeph.profile().cap(TableKind::GwNetAcl);
  bool acl_ratio = acl_z == 100 * acl_t;
  bool acl_fill = true;
  for (uint64_t i = 0; i < acl_t; i++) {
    AclRule r;
    r.vni = static_cast<uint32_t>(i);
    acl_fill = acl_fill && tofino.install_acl(r) == InstallOutcome::Ok;
  }
  AclRule extra;
  extra.vni = 999'999;
  bool acl_reject =
      tofino.install_acl(extra) == InstallOutcome::CapacityExceeded;

  pass = pass && host_reject && zeph_full && acl_ratio && acl_fill &&
         acl_reject;
  std::ostringstream d;
  d << "gw_host 20000-vs-10000 enforced="
    << ((host_reject && zeph_full) ? "yes" : "NO")
    << ", gw_net_acl ratio=" << (acl_z / std::max<uint64_t>(acl_t, 1)) << "x";
  report("5-table-capacity", pass, d.str());
}

// --- criterion 6: coalescing oracle ----------------------------------------

void criterion_coalescing_oracle() {
  std::mt19937_64 rng(60'606);
  uint64_t verdict_mismatches = 0, lookup_mismatches = 0;
  uint64_t coalesced_count = 0, refused_count = 0;

  for (int round = 0; round < 1000; round++) {
    bool force_clean = round % 2 == 0;
    std::vector<LogicalPrefixTable> tables;
    size_t n_tables = 2 + rng() % 3;
    for (size_t t = 0; t < n_tables; t++) {
      LogicalPrefixTable table;
      table.id = "t" + std::to_string(t);
      std::set<std::pair<uint8_t, uint32_t>> used;
      size_t n = 4 + rng() % 24;
      for (size_t i = 0; i < n; i++) {
        Ipv4Prefix p;
        if (force_clean) {
          // distinct /8 per table: cross-table containment impossible
          p.len = static_cast<uint8_t>(9 + rng() % 24);
          p.addr = ((static_cast<uint32_t>(10 + t) << 24) |
                    (static_cast<uint32_t>(rng()) & 0x00ffffff)) &
                   p.mask();
        } else {
          p.len = static_cast<uint8_t>(rng() % 25);
          p.addr = ((static_cast<uint32_t>(rng() % 4) << 24) |
                    (static_cast<uint32_t>(rng()) & 0x00ffffff)) &
                   p.mask();
        }
        if (!used.insert({p.len, p.addr}).second) continue;
        table.entries.push_back({p, static_cast<uint32_t>(rng() % 1000)});
      }
      tables.push_back(std::move(table));
    }

    CoalescePlan plan = coalesce_tables(tables);
    bool oracle_clean = testing::containment_oracle(tables).empty();
    bool coalesced = plan.verdict == CoalescePlan::Verdict::Coalesced;
    if (coalesced != oracle_clean) verdict_mismatches++;
    if (coalesced) {
      coalesced_count++;
      for (int i = 0; i < 10'000; i++) {
        uint32_t ip = static_cast<uint32_t>(rng());
        if (plan.table->lookup(ip) !=
            testing::multi_table_lpm_oracle(tables, ip))
          lookup_mismatches++;
      }
    } else {
      refused_count++;
    }
  }

  bool pass = verdict_mismatches == 0 && lookup_mismatches == 0 &&
              coalesced_count > 0 && refused_count > 0;
  std::ostringstream d;
  d << "1000 sets (" << coalesced_count << " coalesced, " << refused_count
    << " refused), verdict_mismatches=" << verdict_mismatches
    << ", lookup_mismatches=" << lookup_mismatches;
  report("6-coalescing-oracle", pass, d.str());
}

// --- criterion 7: version-update correctness --------------------------------

ScenarioConfig multi_service_scenario(unsigned services, uint64_t flows,
                                      uint64_t packets, uint64_t seed) {
  ScenarioConfig c = local_traffic_scenario(GatewayVariant::Zephyrus, flows,
                                            packets, 1'000'000, seed);
  c.workload.distribution = WorkloadSpec::Distribution::RoundRobin;
  c.workload.coverage_first = false;
  c.workload.vnis.clear();
  c.tables.services.clear();
  c.tables.tenants.clear();
  c.tables.policy_routes.clear();
  c.tables.vm_nc_pools.clear();
  c.tables.routes.clear();
  RouteTarget local;
  local.kind = RouteTarget::Kind::EcmpGroup;
  local.id = 3;
  local.local_vm = true;
  for (unsigned s = 1; s <= services; s++) {
    uint16_t rt = static_cast<uint16_t>(s);
    c.workload.vnis.push_back(100 * s);
    c.tables.services.push_back({static_cast<uint16_t>(s), 1, {}});
    c.tables.tenants.push_back({100 * s, {rt, static_cast<uint16_t>(s)}});
    c.tables.policy_routes.push_back(
        {rt, Ipv4Prefix::parse("0.0.0.0/0"), 10u * s});
    c.tables.routes.push_back(
        {10u * s, Ipv4Prefix::parse("192.168.0.0/16"), local});
    c.tables.vm_nc_pools.push_back(
        {rt, parse_ipv4("192.168.0.0"), 1024, parse_ipv4("172.16.0.0"), 64});
  }
  return c;
}

void criterion_version_update() {
  std::mt19937_64 rng(70'707);
  bool pass = true;
  std::ostringstream firstfail;
  const int cases = 12;
  for (int i = 0; i < cases; i++) {
    unsigned services = 2 + rng() % 3;
    uint64_t flows = (20 + rng() % 180) * services;  // multiple of services
    const uint64_t passes = 6;
    uint64_t packets = passes * flows;
    uint16_t bumped = static_cast<uint16_t>(1 + rng() % services);
    ScenarioConfig c = multi_service_scenario(services, flows, packets, i);
    ControlOp op;
    op.kind = ControlOp::Kind::BumpVersion;
    op.svc_id = bumped;
    c.control_events.push_back({3 * flows, op});  // steady state by then

    RunMetrics m = tracked_run("version-update-" + std::to_string(i), c);

    uint64_t per_service = flows / services;
    bool ok = m.dropped_total == 0 && m.slow_no_entry == flows &&
              m.slow_version_mismatch == per_service &&
              m.slow_by_service.at(bumped) == 2 * per_service &&
              m.path_fast_hit == packets - flows - per_service;
    for (unsigned s = 1; s <= services && ok; s++) {
      if (s == bumped) continue;
      // zero extra transits for the untouched services
      ok = m.slow_by_service.at(static_cast<uint16_t>(s)) == per_service;
    }
    if (!ok && pass) {
      pass = false;
      firstfail << "case " << i << ": services=" << services
                << " flows=" << flows << " bumped=" << bumped
                << " mismatches=" << m.slow_version_mismatch << "/"
                << per_service;
    }
  }
  std::ostringstream d;
  d << cases << " randomized bump cases, exact detour counts";
  report("7-version-update", pass, pass ? d.str() : firstfail.str());
}

// --- criterion 8: conservation + byte-identical determinism -----------------

void criterion_conservation_determinism() {
  ScenarioConfig c = local_traffic_scenario(GatewayVariant::Zephyrus, 5'000,
                                            100'000, 50'000, 99);
  c.workload.local_fraction = 0.7;
  c.workload.cross_fraction = 0.2;
  c.workload.control_fraction = 0.1;

  auto run_to_files = [&](const std::string &tag) {
    JsonlTraceWriter tracer("acceptance_trace_" + tag + ".jsonl");
    RunMetrics m = tracked_run("determinism-" + tag, c, &tracer);
    tracer.flush();
    std::ofstream out("acceptance_metrics_" + tag + ".json", std::ios::binary);
    out << m.to_json().dump(2) << "\n";
  };
  run_to_files("a");
  run_to_files("b");

  auto slurp = [](const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string ma = slurp("acceptance_metrics_a.json");
  std::string mb = slurp("acceptance_metrics_b.json");
  std::string ta = slurp("acceptance_trace_a.jsonl");
  std::string tb = slurp("acceptance_trace_b.jsonl");
  bool identical = !ma.empty() && ma == mb && !ta.empty() && ta == tb;

  uint64_t violations = 0;
  for (const auto &[name, m] : g_runs)
    if (!m.conservation_holds()) violations++;

  bool pass = identical && violations == 0;
  std::ostringstream d;
  d << "byte_identical=" << (identical ? "yes" : "NO")
    << ", runs_checked=" << g_runs.size()
    << ", conservation_violations=" << violations;
  report("8-conservation-determinism", pass, d.str());
}

void check_shipped_scenarios() {
  const char *dir = GWSIM_SCENARIO_DIR;
  bool pass = true;
  std::string bad;
  for (const char *name :
       {"demo_small.json", "software_loss.json", "placement_baseline.json",
        "placement_zephyrus.json"}) {
    try {
      (void)load_scenario_file(std::string(dir) + "/" + name);
    } catch (const std::exception &e) {
      pass = false;
      bad = std::string(name) + ": " + e.what();
    }
  }
  report("0-scenario-files", pass, pass ? "all shipped configs load" : bad);
}

}  // namespace

int main() {
  std::printf("gateway simulator acceptance suite\n");
  check_shipped_scenarios();
  criterion_offload_ratio();
  criterion_loss_contrast();
  criterion_latency_delta();
  criterion_sram_hotspot();
  criterion_table_capacity();
  criterion_coalescing_oracle();
  criterion_version_update();
  criterion_conservation_determinism();
  if (g_failures == 0) {
    std::printf("all acceptance criteria PASS\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
