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

#ifndef GWSIM_WORKLOAD_HPP_
#define GWSIM_WORKLOAD_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "gwsim/packet.hpp"

namespace gwsim {

enum class FlowCategory { LocalVm, CrossRegion, Control };

struct WorkloadSpec {
  uint64_t flows = 1;

  enum class Distribution { Uniform, Zipf, RoundRobin };
  Distribution distribution = Distribution::Uniform;
  double zipf_s = 1.0;

  // Fractions of flows per destination category; must sum to 1.
  double local_fraction = 1.0;
  double cross_fraction = 0.0;
  double control_fraction = 0.0;

  // Emit one packet per flow, in flow order, before sampling from the
  // distribution. Guarantees every configured flow appears in the run.
  bool coverage_first = false;

  std::vector<uint32_t> vnis{100};

  // Address plan. Flow f sources from src_base + f; local destinations
  // cycle through the VM pool, cross-region ones through the remote subnet.
  uint32_t src_base = 0x0a000000;        // 10.0.0.0
  uint32_t local_dst_base = 0xc0a80000;  // 192.168.0.0
  uint32_t local_dst_count = 1024;
  uint32_t cross_dst_base = 0xc6120000;  // 198.18.0.0
  uint32_t cross_dst_count = 1024;
  uint32_t vtep_base = 0xc0000201;  // 192.0.2.1
  uint32_t vtep_count = 16;
  uint32_t gateway_ip = 0xcb007101;  // 203.0.113.1
  uint32_t payload_len = 1400;

  void validate() const;  // throws ConfigError
};

// Deterministic packet stream: same (spec, seed, rate) means the same bytes.
// trace ids are assigned by the harness at ingress, not here.
class WorkloadGenerator {
 public:
  WorkloadGenerator(const WorkloadSpec &spec, uint64_t seed,
                    uint64_t send_rate_pps);

  PacketDescriptor next();
  uint64_t emitted() const { return emitted_; }

  // Flow layout accessors used by scenario auto-population.
  FlowCategory category_of(uint64_t flow) const {
    return flows_[flow].category;
  }
  const FiveTuple &tuple_of(uint64_t flow) const { return flows_[flow].tuple; }

 private:
  struct FlowInfo {
    FiveTuple tuple;
    uint32_t vni = 0;
    uint32_t outer_src = 0;
    FlowCategory category = FlowCategory::LocalVm;
  };

  double u01() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  uint64_t sample_flow();

  WorkloadSpec spec_;
  std::mt19937_64 rng_;
  std::vector<FlowInfo> flows_;
  std::vector<double> zipf_cdf_;
  uint64_t interval_ns_;
  uint64_t emitted_ = 0;
};

}  // namespace gwsim

#endif  // GWSIM_WORKLOAD_HPP_
