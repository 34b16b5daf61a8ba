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

#include <random>

#include "doctest.h"
#include "gwsim/control.hpp"
#include "gwsim/errors.hpp"
#include "oracles.hpp"

using namespace gwsim;

namespace {

std::set<testing::ConflictKey> normalize(
    const std::vector<ConflictPair> &conflicts) {
  std::set<testing::ConflictKey> out;
  for (const auto &c : conflicts) {
    testing::ConflictKey k1{c.table_a, c.prefix_a.str(), c.table_b,
                            c.prefix_b.str()};
    testing::ConflictKey k2{c.table_b, c.prefix_b.str(), c.table_a,
                            c.prefix_a.str()};
    out.insert(std::min(k1, k2));
  }
  return out;
}

}  // namespace

TEST_CASE("capacity profiles carry the documented ratios") {
  auto tofino = CapacityProfile::tofino_only();
  auto zeph = CapacityProfile::zephyrus();

  CHECK(tofino.cap(TableKind::GwHost) == 1'000'000);
  CHECK(zeph.cap(TableKind::GwHost) == 2'000'000);
  CHECK(zeph.cap(TableKind::GwNetAcl) == 100 * tofino.cap(TableKind::GwNetAcl));
  for (TableKind k : {TableKind::GwInterface, TableKind::GwMeter,
                      TableKind::GwRoute, TableKind::GwNexthop})
    CHECK(zeph.cap(k) >= 10 * tofino.cap(k));

  CHECK(zeph.supports(TableKind::GwNexthopAffinity));
  CHECK_FALSE(tofino.supports(TableKind::GwNexthopAffinity));

  // scaled-down profiles preserve the ratios
  auto tofino100 = CapacityProfile::tofino_only(100);
  auto zeph100 = CapacityProfile::zephyrus(100);
  CHECK(tofino100.cap(TableKind::GwHost) == 10'000);
  CHECK(zeph100.cap(TableKind::GwHost) == 20'000);
  CHECK(zeph100.cap(TableKind::GwNetAcl) ==
        100 * tofino100.cap(TableKind::GwNetAcl));
}

TEST_CASE("install enforces capacity and duplicate detection") {
  Gateway gw(16);
  CapacityProfile tiny("tiny", {{TableKind::GwHost, 3},
                                {TableKind::GwNexthopAffinity, 2}});
  ControlPlane cp(&gw, tiny);

  CHECK(cp.install_vm_nc(7, 1, 100) == InstallOutcome::Ok);
  CHECK(cp.install_vm_nc(7, 2, 100) == InstallOutcome::Ok);
  CHECK(cp.install_vm_nc(7, 1, 200) == InstallOutcome::DuplicateKey);
  CHECK(cp.install_vm_nc(7, 3, 100) == InstallOutcome::Ok);
  CHECK(cp.install_vm_nc(7, 4, 100) == InstallOutcome::CapacityExceeded);
  CHECK(cp.installed_count(TableKind::GwHost) == 3);

  CHECK(cp.install_generic(TableKind::GwNexthopAffinity, 1) ==
        InstallOutcome::Ok);
  CHECK(cp.install_generic(TableKind::GwNexthopAffinity, 1) ==
        InstallOutcome::DuplicateKey);
  // unsupported kind is a precondition violation, not an outcome
  CHECK_THROWS_AS(cp.install_generic(TableKind::GwMeter, 1), ConfigError);
}

TEST_CASE("gw_host scaled capacities split the two gateway generations") {
  // 1:100 scale keeps the 2M-vs-1M contrast testable on a desk
  Gateway gw_t(16), gw_z(16);
  ControlPlane tofino(&gw_t, CapacityProfile::tofino_only(100));
  ControlPlane zeph(&gw_z, CapacityProfile::zephyrus(100));

  for (uint32_t i = 0; i < 10'000; i++)
    REQUIRE(tofino.install_vm_nc(1, i, 7) == InstallOutcome::Ok);
  CHECK(tofino.install_vm_nc(1, 10'000, 7) ==
        InstallOutcome::CapacityExceeded);

  for (uint32_t i = 0; i < 20'000; i++)
    REQUIRE(zeph.install_vm_nc(1, i, 7) == InstallOutcome::Ok);
  CHECK(zeph.install_vm_nc(1, 20'000, 7) == InstallOutcome::CapacityExceeded);
}

TEST_CASE("collision check finds containment across tables only") {
  SUBCASE("containment pair") {
    std::vector<LogicalPrefixTable> tables{
        {"a", {{Ipv4Prefix::parse("10.0.0.0/8"), 1}}},
        {"b", {{Ipv4Prefix::parse("10.1.0.0/16"), 2}}},
    };
    auto conflicts = check_collision(tables);
    REQUIRE(conflicts.size() == 1);
    CHECK(conflicts[0].prefix_a.str() == "10.0.0.0/8");
    CHECK(conflicts[0].prefix_b.str() == "10.1.0.0/16");
  }

  SUBCASE("disjoint tables are clean") {
    std::vector<LogicalPrefixTable> tables{
        {"a", {{Ipv4Prefix::parse("10.0.0.0/16"), 1}}},
        {"b", {{Ipv4Prefix::parse("11.0.0.0/16"), 2}}},
    };
    CHECK(check_collision(tables).empty());
  }

  SUBCASE("empty input is clean") {
    CHECK(check_collision({}).empty());
  }

  SUBCASE("same-table nesting is not a conflict") {
    std::vector<LogicalPrefixTable> tables{
        {"a",
         {{Ipv4Prefix::parse("10.0.0.0/8"), 1},
          {Ipv4Prefix::parse("10.1.0.0/16"), 2}}}};
    CHECK(check_collision(tables).empty());
  }

  SUBCASE("equal prefixes in different tables conflict") {
    std::vector<LogicalPrefixTable> tables{
        {"a", {{Ipv4Prefix::parse("10.0.0.0/8"), 1}}},
        {"b", {{Ipv4Prefix::parse("10.0.0.0/8"), 2}}},
    };
    CHECK(check_collision(tables).size() == 1);
  }
}

TEST_CASE("collision sweep matches the quadratic oracle on random tables") {
  std::mt19937_64 rng(1212);
  for (int round = 0; round < 200; round++) {
    std::vector<LogicalPrefixTable> tables;
    size_t n_tables = 2 + rng() % 4;
    for (size_t t = 0; t < n_tables; t++) {
      LogicalPrefixTable table;
      table.id = "t" + std::to_string(t);
      size_t n = 1 + rng() % 24;
      for (size_t i = 0; i < n; i++) {
        Ipv4Prefix p;
        p.len = static_cast<uint8_t>(rng() % 25);
        // narrow address pool to provoke real containment
        p.addr = (static_cast<uint32_t>(rng() % 4) << 24 |
                  (static_cast<uint32_t>(rng()) & 0x00ffffff)) &
                 p.mask();
        table.entries.push_back({p, static_cast<uint32_t>(rng() % 100)});
      }
      tables.push_back(std::move(table));
    }
    CHECK(normalize(check_collision(tables)) ==
          testing::containment_oracle(tables));
  }
}

TEST_CASE("coalesce verdicts follow the conflict list") {
  SUBCASE("conflict-free tables coalesce with descending probe list") {
    std::vector<LogicalPrefixTable> tables{
        {"a", {{Ipv4Prefix::parse("10.0.0.0/16"), 1}}},
        {"b", {{Ipv4Prefix::parse("11.0.0.0/8"), 2}}},
    };
    CoalescePlan plan = coalesce_tables(tables);
    CHECK(plan.verdict == CoalescePlan::Verdict::Coalesced);
    REQUIRE(plan.probe_lengths.size() == 2);
    CHECK(plan.probe_lengths[0] == 16);
    CHECK(plan.probe_lengths[1] == 8);
    REQUIRE(plan.table.has_value());
    CHECK(*plan.table->lookup(parse_ipv4("11.5.5.5")) == 2);
  }

  SUBCASE("conflicting tables are refused with the pair") {
    std::vector<LogicalPrefixTable> tables{
        {"a", {{Ipv4Prefix::parse("10.0.0.0/8"), 1}}},
        {"b", {{Ipv4Prefix::parse("10.1.0.0/16"), 2}}},
    };
    CoalescePlan plan = coalesce_tables(tables);
    CHECK(plan.verdict == CoalescePlan::Verdict::Refused);
    CHECK(plan.conflicts.size() == 1);
    CHECK_FALSE(plan.table.has_value());
  }

  SUBCASE("a single table coalesces with its own lengths") {
    std::vector<LogicalPrefixTable> tables{
        {"only",
         {{Ipv4Prefix::parse("10.0.0.0/8"), 1},
          {Ipv4Prefix::parse("10.1.0.0/16"), 2},
          {Ipv4Prefix::parse("10.1.2.0/24"), 3}}}};
    CoalescePlan plan = coalesce_tables(tables);
    CHECK(plan.verdict == CoalescePlan::Verdict::Coalesced);
    CHECK(plan.probe_lengths == std::vector<uint8_t>{24, 16, 8});
  }
}

TEST_CASE("version bumps are queued and applied at event boundaries") {
  Gateway gw(16);
  ControlPlane cp(&gw, CapacityProfile::zephyrus());
  REQUIRE(cp.install_service({3, 3, {}}) == InstallOutcome::Ok);

  cp.queue_bump_version(3);
  CHECK(gw.services.version_of(3) == 3);  // not visible yet
  CHECK(cp.has_pending());
  uint64_t gen = cp.generation();
  cp.apply_pending();
  CHECK(gw.services.version_of(3) == 4);
  CHECK(cp.generation() == gen + 1);

  CHECK_THROWS_AS(cp.queue_bump_version(99), ConfigError);
}

TEST_CASE("service versions increase strictly") {
  ServiceRegistry reg;
  reg.add({1, 1, {}});
  uint16_t last = reg.version_of(1);
  for (int i = 0; i < 100; i++) {
    uint16_t next = reg.bump(1);
    CHECK(next == last + 1);
    last = next;
  }
}

TEST_CASE("distribution mode validation rejects bad dpu indices") {
  Gateway gw(16);
  ControlPlane cp(&gw, CapacityProfile::zephyrus());

  FiveTuple t;
  t.src_ip = 1;
  t.proto = kProtoTcp;
  CHECK(cp.queue_pin_flow(t, 7) == SetModeOutcome::InvalidDpuIndex);
  CHECK(cp.queue_pin_flow(t, 2) == SetModeOutcome::Ok);
  cp.apply_pending();
  CHECK(gw.asic.select_dpu(t) == 2);

  cp.queue_unpin_flow(t);
  cp.apply_pending();
  CHECK(gw.asic.select_dpu(t) == five_tuple_hash(t) % kNumDpus);

  DistributionMode bad;
  bad.kind = DistributionMode::Kind::Pinned;
  bad.pins[t] = 9;
  CHECK(cp.queue_set_distribution_mode(bad) ==
        SetModeOutcome::InvalidDpuIndex);
}

TEST_CASE("dpu route staging feeds the coalescer") {
  Gateway gw(16);
  ControlPlane cp(&gw, CapacityProfile::zephyrus());
  CHECK(cp.install_dpu_route_entry("a", Ipv4Prefix::parse("10.0.0.0/16"), 1) ==
        InstallOutcome::Ok);
  CHECK(cp.install_dpu_route_entry("a", Ipv4Prefix::parse("10.0.0.0/16"), 2) ==
        InstallOutcome::DuplicateKey);
  CHECK(cp.install_dpu_route_entry("b", Ipv4Prefix::parse("11.0.0.0/16"), 2) ==
        InstallOutcome::Ok);
  CoalescePlan plan = cp.build_dpu_routes();
  CHECK(plan.verdict == CoalescePlan::Verdict::Coalesced);
  CHECK(gw.dpu_routes.coalesced());
  CHECK(*gw.dpu_routes.lookup(parse_ipv4("11.0.5.5")) == 2);

  // a containing entry from another logical table forces the fallback
  CHECK(cp.install_dpu_route_entry("c", Ipv4Prefix::parse("10.0.0.0/8"), 3) ==
        InstallOutcome::Ok);
  plan = cp.build_dpu_routes();
  CHECK(plan.verdict == CoalescePlan::Verdict::Refused);
  CHECK_FALSE(gw.dpu_routes.coalesced());
  // fallback still answers with true LPM semantics
  CHECK(*gw.dpu_routes.lookup(parse_ipv4("10.0.0.1")) == 1);
  CHECK(*gw.dpu_routes.lookup(parse_ipv4("10.5.0.1")) == 3);
}
