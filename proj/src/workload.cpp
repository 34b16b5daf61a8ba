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

#include "gwsim/workload.hpp"

#include <algorithm>
#include <cmath>

#include "gwsim/errors.hpp"

namespace gwsim {

void WorkloadSpec::validate() const {
  if (flows == 0) throw ConfigError("workload needs at least one flow");
  if (vnis.empty()) throw ConfigError("workload needs at least one VNI");
  double total = local_fraction + cross_fraction + control_fraction;
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("locality fractions must sum to 1, got " +
                      std::to_string(total));
  if (local_fraction < 0 || cross_fraction < 0 || control_fraction < 0)
    throw ConfigError("locality fractions must be non-negative");
  if (distribution == Distribution::Zipf && zipf_s <= 0)
    throw ConfigError("zipf exponent must be positive");
  if (local_dst_count == 0 || cross_dst_count == 0 || vtep_count == 0)
    throw ConfigError("address pool counts must be positive");
}

WorkloadGenerator::WorkloadGenerator(const WorkloadSpec &spec, uint64_t seed,
                                     uint64_t send_rate_pps)
    : spec_(spec), rng_(seed) {
  spec_.validate();
  if (send_rate_pps == 0) throw ConfigError("send rate must be positive");
  interval_ns_ = 1'000'000'000ULL / send_rate_pps;
  if (interval_ns_ == 0) interval_ns_ = 1;

  // Flow layout is a pure function of (spec, flow index): categories are
  // assigned by cumulative fraction so a given flow count always splits the
  // same way.
  flows_.resize(spec_.flows);
  uint64_t local_cut =
      static_cast<uint64_t>(spec_.local_fraction * spec_.flows + 0.5);
  uint64_t cross_cut = local_cut + static_cast<uint64_t>(
                                       spec_.cross_fraction * spec_.flows + 0.5);
  for (uint64_t f = 0; f < spec_.flows; f++) {
    FlowInfo &info = flows_[f];
    info.category = f < local_cut      ? FlowCategory::LocalVm
                    : f < cross_cut    ? FlowCategory::CrossRegion
                                       : FlowCategory::Control;
    info.vni = spec_.vnis[f % spec_.vnis.size()];
    info.outer_src = spec_.vtep_base + static_cast<uint32_t>(f) %
                                           spec_.vtep_count;
    FiveTuple &t = info.tuple;
    t.src_ip = spec_.src_base + static_cast<uint32_t>(f);
    t.proto = kProtoTcp;
    t.src_port = static_cast<uint16_t>(1024 + (f * 7919) % 50000);
    switch (info.category) {
      case FlowCategory::LocalVm:
        t.dst_ip = spec_.local_dst_base +
                   static_cast<uint32_t>(f) % spec_.local_dst_count;
        t.dst_port = 443;
        break;
      case FlowCategory::CrossRegion:
        t.dst_ip = spec_.cross_dst_base +
                   static_cast<uint32_t>(f) % spec_.cross_dst_count;
        t.dst_port = 443;
        break;
      case FlowCategory::Control:
        t.dst_ip = spec_.gateway_ip;
        t.dst_port = 179;  // BGP-style
        break;
    }
  }

  if (spec_.distribution == WorkloadSpec::Distribution::Zipf) {
    zipf_cdf_.resize(spec_.flows);
    double sum = 0;
    for (uint64_t i = 0; i < spec_.flows; i++) {
      sum += std::pow(static_cast<double>(i + 1), -spec_.zipf_s);
      zipf_cdf_[i] = sum;
    }
    for (auto &v : zipf_cdf_) v /= sum;
  }
}

uint64_t WorkloadGenerator::sample_flow() {
  switch (spec_.distribution) {
    case WorkloadSpec::Distribution::RoundRobin:
      return emitted_ % spec_.flows;
    case WorkloadSpec::Distribution::Uniform:
      return rng_() % spec_.flows;
    case WorkloadSpec::Distribution::Zipf: {
      double u = u01();
      auto it = std::upper_bound(zipf_cdf_.begin(), zipf_cdf_.end(), u);
      if (it == zipf_cdf_.end()) --it;
      return static_cast<uint64_t>(it - zipf_cdf_.begin());
    }
  }
  return 0;
}

PacketDescriptor WorkloadGenerator::next() {
  uint64_t flow;
  if (spec_.coverage_first && emitted_ < spec_.flows) {
    flow = emitted_;
  } else {
    flow = sample_flow();
  }
  const FlowInfo &info = flows_[flow];

  PacketDescriptor p;
  p.arrival_ns = emitted_ * interval_ns_;
  p.inner = info.tuple;
  p.payload_len = spec_.payload_len;
  if (info.category == FlowCategory::Control) {
    // Bare protocol packet: no encapsulation, addressed to the gateway.
    p.outer_src_ip = info.tuple.src_ip;
    p.outer_dst_ip = spec_.gateway_ip;
  } else {
    p.outer_src_ip = info.outer_src;
    p.outer_dst_ip = spec_.gateway_ip;
    p.encap = VxlanEncap{info.vni};
  }
  emitted_++;
  return p;
}

}  // namespace gwsim
