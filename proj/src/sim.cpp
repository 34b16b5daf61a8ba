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

#include "gwsim/sim.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <string>

namespace gwsim {

struct Simulation::PacketContext {
  PacketDescriptor p;
  TraceSink *sink = nullptr;
  TraceRecord rec;

  void hop(std::string component, uint32_t stage, std::string action,
           uint64_t t) {
    rec.hops.push_back({std::move(component), stage, std::move(action), t});
  }

  void finish(Disposition d, std::optional<DropReason> reason = {}) {
    if (!sink) return;
    rec.trace_id = p.trace_id;
    rec.disposition = d;
    rec.drop_reason = reason;
    sink->record(std::move(rec));
  }
};

Simulation::Simulation(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  gateway_ = std::make_unique<Gateway>(cfg_.cache_capacity);
  control_ = std::make_unique<ControlPlane>(
      gateway_.get(), cfg_.profile.resolve(cfg_.variant));
  install_tables();
}

namespace {

void require_ok(InstallOutcome out, const std::string &what) {
  if (out == InstallOutcome::Ok) return;
  throw ConfigError(what + (out == InstallOutcome::CapacityExceeded
                                ? ": capacity exceeded"
                                : ": duplicate key"));
}

}  // namespace

void Simulation::install_tables() {
  AsicPipeline &asic = gateway_->asic;
  asic.set_hash_seed(cfg_.hash_seed);
  // Only the Zephyrus gateway has the DPU stage in the datapath.
  asic.set_dpu_enabled(cfg_.variant == GatewayVariant::Zephyrus);

  const TablesConfig &t = cfg_.tables;
  for (const auto &svc : t.services)
    require_ok(control_->install_service(svc),
               "service " + std::to_string(svc.svc_id));
  for (uint32_t ip : t.vteps)
    require_ok(control_->install_vtep(ip), "vtep " + format_ipv4(ip));
  if (t.vtep_pool) {
    for (uint32_t i = 0; i < t.vtep_pool->count; i++)
      require_ok(control_->install_vtep(t.vtep_pool->base + i),
                 "vtep pool entry " + std::to_string(i));
  }
  for (const auto &rule : t.protocol_rules)
    require_ok(control_->install_protocol_rule(rule), "protocol rule");
  for (const auto &tc : t.tenants)
    require_ok(control_->install_tenant(tc.vni, tc.binding),
               "tenant vni " + std::to_string(tc.vni));
  for (const auto &pr : t.policy_routes)
    require_ok(
        control_->install_policy_route(pr.route_table_id, pr.prefix,
                                       pr.instance),
        "policy route " + pr.prefix.str());
  for (const auto &rc : t.routes)
    require_ok(control_->install_route(rc.instance, rc.prefix, rc.target),
               "route " + rc.prefix.str());
  for (const auto &g : t.ecmp_groups)
    require_ok(control_->install_ecmp_group(g),
               "ecmp group " + std::to_string(g.group_id));
  for (const auto &nh : t.nexthops)
    require_ok(control_->install_nexthop(nh),
               "nexthop " + std::to_string(nh.nexthop_index));
  for (const auto &v : t.vm_nc)
    require_ok(control_->install_vm_nc(v.route_table_id, v.vm_ip, v.host),
               "vm_nc " + format_ipv4(v.vm_ip));
  for (const auto &pool : t.vm_nc_pools) {
    for (uint32_t i = 0; i < pool.count; i++)
      require_ok(
          control_->install_vm_nc(pool.route_table_id, pool.vm_base + i,
                                  pool.host_base + i % pool.host_count),
          "vm_nc pool entry " + std::to_string(i));
  }
  for (const auto &d : t.dpu_routes)
    require_ok(
        control_->install_dpu_route_entry(d.table, d.prefix, d.nexthop),
        "dpu route " + d.prefix.str());
  for (const auto &rule : t.acl)
    require_ok(control_->install_acl(rule), "acl rule");

  coalesce_plan_ = control_->build_dpu_routes();
  asic.set_distribution_mode(cfg_.distribution);
}

RunMetrics Simulation::run(TraceSink *sink) {
  RunMetrics m;
  if (cfg_.variant == GatewayVariant::Zephyrus) {
    m.dpus.resize(kNumDpus);
    for (unsigned i = 0; i < kNumDpus; i++)
      m.dpus[i].capacity = cfg_.cache_capacity;
  }

  WorkloadGenerator gen(cfg_.workload, cfg_.seed, cfg_.send_rate_pps);
  TraceIdSource trace_ids;
  std::optional<SoftwareCoreModel> sw;
  if (cfg_.variant == GatewayVariant::SoftwareOnly)
    sw.emplace(cfg_.software.cores, cfg_.software.per_core_pps,
               cfg_.software.queue_depth, cfg_.hash_seed);

  auto events = cfg_.control_events;
  std::stable_sort(events.begin(), events.end(),
                   [](const ControlEventConfig &a, const ControlEventConfig &b) {
                     return a.at_packet < b.at_packet;
                   });
  size_t next_event = 0;

  for (uint64_t i = 0; i < cfg_.packet_count; i++) {
    // Control-plane mutations land between packets, never mid-packet.
    bool queued = false;
    while (next_event < events.size() && events[next_event].at_packet <= i) {
      const ControlOp &op = events[next_event].op;
      switch (op.kind) {
        case ControlOp::Kind::BumpVersion:
          control_->queue_bump_version(op.svc_id);
          break;
        case ControlOp::Kind::SetDistributionMode:
          control_->queue_set_distribution_mode(op.mode);
          break;
        case ControlOp::Kind::PinFlow:
          control_->queue_pin_flow(op.flow, op.dpu_index);
          break;
        case ControlOp::Kind::UnpinFlow:
          control_->queue_unpin_flow(op.flow);
          break;
      }
      next_event++;
      queued = true;
    }
    if (queued) control_->apply_pending();

    PacketContext ctx;
    ctx.p = assign_trace_id(gen.next(), trace_ids);
    ctx.sink = sink;
    m.injected++;
    if (sw)
      process_software(ctx, *sw, m);
    else
      process_hardware(ctx, m);
  }

  m.offload_ratio =
      m.injected == 0
          ? 0.0
          : static_cast<double>(m.path_asic_only + m.path_fast_hit) /
                static_cast<double>(m.injected);
  for (size_t i = 0; i < m.dpus.size(); i++) {
    const DpuCounters &c = gateway_->dpus[i].counters();
    m.dpus[i].fast_hits = c.fast_hits;
    m.dpus[i].miss_no_entry = c.miss_no_entry;
    m.dpus[i].miss_version = c.miss_version;
    m.dpus[i].installs = c.installs;
    m.dpus[i].evictions = c.evictions;
    m.dpus[i].occupancy = gateway_->dpus[i].cache().size();
  }
  if (sw) {
    for (const auto &st : sw->stats())
      m.sw_cores.push_back({st.delivered, st.dropped, st.peak_queue});
  }
  assert(m.conservation_holds());
  return m;
}

namespace {

void count_drop(RunMetrics &m, DropReason reason) {
  m.dropped_total++;
  m.dropped_by_reason[drop_reason_name(reason)]++;
}

void add_latency(RunMetrics &m, Disposition d, uint64_t ns) {
  m.latency_all.add(ns);
  switch (d) {
    case Disposition::AsicOnly: m.latency_asic_only.add(ns); break;
    case Disposition::FastHit: m.latency_fast_hit.add(ns); break;
    case Disposition::SlowPath: m.latency_slow.add(ns); break;
    case Disposition::Software: m.latency_software.add(ns); break;
    default: break;
  }
}

}  // namespace

void Simulation::process_hardware(PacketContext &ctx, RunMetrics &m) {
  const LatencyParams &lat = cfg_.latency;
  const uint64_t arrival = ctx.p.arrival_ns;
  const bool tracing = ctx.sink != nullptr;

  if (tracing) ctx.hop("asic_pre", 0, "ingress", arrival);
  PreDpuResult pre = gateway_->asic.pre_dpu_process(ctx.p);

  switch (pre.decision.kind) {
    case PathDecision::Kind::PuntToCpu: {
      if (tracing) {
        ctx.hop("asic_pre", 3, "divert=punt_to_cpu", arrival);
        ctx.hop("cpu", 0, "control_handoff", arrival + lat.tofino_ns / 2);
      }
      m.punted++;
      ctx.finish(Disposition::PuntToCpu);
      return;
    }
    case PathDecision::Kind::Drop: {
      if (tracing)
        ctx.hop("asic_pre", 0,
                std::string("drop=") +
                    drop_reason_name(pre.decision.drop_reason),
                arrival);
      count_drop(m, pre.decision.drop_reason);
      ctx.finish(Disposition::Drop, pre.decision.drop_reason);
      return;
    }
    case PathDecision::Kind::AsicOnly: {
      PostDpuResult post = gateway_->asic.post_dpu_process(pre.metadata);
      if (!post.ok) {
        if (tracing) ctx.hop("asic_post", 0, "drop=nexthop_miss", arrival);
        count_drop(m, post.drop_reason);
        ctx.finish(Disposition::Drop, post.drop_reason);
        return;
      }
      uint64_t total = lat.tofino_ns;
      if (tracing) {
        ctx.hop("asic_pre", 2,
                "route=nexthop:" + std::to_string(pre.metadata.nexthop_index),
                arrival);
        ctx.hop("asic_post", 3,
                "egress port=" + std::to_string(post.action.out_port),
                arrival + total);
      }
      m.delivered++;
      m.path_asic_only++;
      add_latency(m, Disposition::AsicOnly, total);
      ctx.finish(Disposition::AsicOnly);
      return;
    }
    case PathDecision::Kind::ToDpu:
      break;
  }

  // DPU handoff crosses the wire format both ways.
  unsigned d = pre.decision.dpu_index;
  m.dpus[d].packets++;
  DpuDatapath &dpu = gateway_->dpus[d];
  auto wire = serialize_metadata(pre.metadata);
  InternalMetadata md =
      parse_metadata(wire.data(), wire.size(), ctx.p.trace_id);

  if (tracing)
    ctx.hop("asic_pre", 2, "to_dpu=" + std::to_string(d), arrival);

  FastPathResult fast = dpu.fast_path(ctx.p, md, arrival);
  uint64_t t_dpu = arrival + lat.tofino_ns / 2 + lat.dpu_fast_ns;

  if (fast.kind == FastPathResult::Kind::Hit) {
    if (tracing)
      ctx.hop("dpu" + std::to_string(d), kDpuMaStages,
              "cache_hit nexthop=" + std::to_string(fast.nexthop_index),
              t_dpu);
    auto back = serialize_metadata(md);
    InternalMetadata ret =
        parse_metadata(back.data(), back.size(), ctx.p.trace_id);
    PostDpuResult post = gateway_->asic.post_dpu_process(ret);
    if (!post.ok) {
      if (tracing) ctx.hop("asic_post", 0, "drop=nexthop_miss", t_dpu);
      count_drop(m, post.drop_reason);
      ctx.finish(Disposition::Drop, post.drop_reason);
      return;
    }
    uint64_t total = lat.tofino_ns + lat.dpu_fast_ns;
    if (tracing)
      ctx.hop("asic_post", 3,
              "egress port=" + std::to_string(post.action.out_port),
              arrival + total);
    m.delivered++;
    m.path_fast_hit++;
    add_latency(m, Disposition::FastHit, total);
    ctx.finish(Disposition::FastHit);
    return;
  }

  bool version_miss =
      fast.miss_reason == FastPathResult::MissReason::VersionMismatch;
  if (tracing)
    ctx.hop("dpu" + std::to_string(d), kDpuMaStages,
            version_miss ? "miss=version_mismatch" : "miss=no_entry", t_dpu);

  SlowPathOutcome slow = dpu.slow_path(ctx.p, md);
  uint64_t t_arm = t_dpu + lat.slow_extra_ns;
  if (!slow.ok) {
    if (tracing)
      ctx.hop("dpu" + std::to_string(d) + ".arm", 0,
              std::string("drop=") + drop_reason_name(slow.drop_reason),
              t_arm);
    count_drop(m, slow.drop_reason);
    ctx.finish(Disposition::Drop, slow.drop_reason);
    return;
  }

  if (version_miss)
    m.slow_version_mismatch++;
  else
    m.slow_no_entry++;
  m.slow_by_service[md.svc_id]++;

  CacheInstallOutcome install = dpu.offload_install(
      DpuDatapath::flow_key_of(ctx.p), slow.decision, arrival);
  if (tracing) {
    ctx.hop("dpu" + std::to_string(d) + ".arm", 0,
            "slow_path nexthop=" + std::to_string(slow.decision.nexthop_index),
            t_arm);
    if (install.kind == CacheInstallOutcome::Kind::EvictedInstalled &&
        install.victim) {
      ctx.hop("dpu" + std::to_string(d) + ".arm", 0,
              "offload_evict victim_src=" +
                  format_ipv4(install.victim->tuple.src_ip),
              t_arm);
    }
    if (install.kind != CacheInstallOutcome::Kind::Rejected)
      ctx.hop("dpu" + std::to_string(d) + ".arm", 0, "offload_install", t_arm);
  }

  auto back = serialize_metadata(md);
  InternalMetadata ret =
      parse_metadata(back.data(), back.size(), ctx.p.trace_id);
  PostDpuResult post = gateway_->asic.post_dpu_process(ret);
  if (!post.ok) {
    if (tracing) ctx.hop("asic_post", 0, "drop=nexthop_miss", t_arm);
    count_drop(m, post.drop_reason);
    ctx.finish(Disposition::Drop, post.drop_reason);
    return;
  }
  uint64_t total = lat.tofino_ns + lat.dpu_fast_ns + lat.slow_extra_ns;
  if (tracing)
    ctx.hop("asic_post", 3,
            "egress port=" + std::to_string(post.action.out_port),
            arrival + total);
  m.delivered++;
  m.path_slow++;
  add_latency(m, Disposition::SlowPath, total);
  ctx.finish(Disposition::SlowPath);
}

void Simulation::process_software(PacketContext &ctx, SoftwareCoreModel &model,
                                  RunMetrics &m) {
  const uint64_t arrival = ctx.p.arrival_ns;
  const bool tracing = ctx.sink != nullptr;

  if (tracing) ctx.hop("sw", 0, "ingress", arrival);

  TrafficClass cls = gateway_->asic.classify_traffic(ctx.p);
  if (cls == TrafficClass::ControlProtocol) {
    if (tracing) ctx.hop("cpu", 0, "control_handoff", arrival);
    m.punted++;
    ctx.finish(Disposition::PuntToCpu);
    return;
  }

  // Queue admission first: an overflowing core drops before any lookup runs.
  SoftwareCoreModel::Outcome out = model.process(arrival, ctx.p.inner);
  if (!out.delivered) {
    if (tracing)
      ctx.hop("sw_core" + std::to_string(out.core), 0, "drop=queue_overflow",
              arrival);
    count_drop(m, DropReason::SwQueueOverflow);
    ctx.finish(Disposition::Drop, DropReason::SwQueueOverflow);
    return;
  }

  PreDpuResult pre = gateway_->asic.pre_dpu_process(ctx.p);
  if (pre.decision.kind == PathDecision::Kind::Drop) {
    if (tracing)
      ctx.hop("sw_core" + std::to_string(out.core), 0,
              std::string("drop=") +
                  drop_reason_name(pre.decision.drop_reason),
              out.depart_ns);
    count_drop(m, pre.decision.drop_reason);
    ctx.finish(Disposition::Drop, pre.decision.drop_reason);
    return;
  }
  PostDpuResult post = gateway_->asic.post_dpu_process(pre.metadata);
  if (!post.ok) {
    if (tracing)
      ctx.hop("sw_core" + std::to_string(out.core), 0, "drop=nexthop_miss",
              out.depart_ns);
    count_drop(m, post.drop_reason);
    ctx.finish(Disposition::Drop, post.drop_reason);
    return;
  }

  uint64_t total =
      out.depart_ns - arrival + cfg_.latency.software_base_ns;
  if (tracing)
    ctx.hop("sw_core" + std::to_string(out.core), 0,
            "egress port=" + std::to_string(post.action.out_port),
            arrival + total);
  m.delivered++;
  m.path_software++;
  add_latency(m, Disposition::Software, total);
  ctx.finish(Disposition::Software);
}

RunMetrics run_scenario(ScenarioConfig cfg, TraceSink *sink) {
  Simulation sim(std::move(cfg));
  return sim.run(sink);
}

}  // namespace gwsim
