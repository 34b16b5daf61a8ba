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

#ifndef GWSIM_SOFTPATH_HPP_
#define GWSIM_SOFTPATH_HPP_

#include <cstdint>
#include <deque>
#include <vector>

#include "gwsim/packet.hpp"

namespace gwsim {

// The software-only forwarding model: RSS hashes each flow onto one core,
// every core is a FIFO served at a fixed packet rate, arrivals to a full
// queue are dropped. One elephant flow therefore saturates exactly one core
// no matter how many cores exist.
class SoftwareCoreModel {
 public:
  struct CoreStats {
    uint64_t delivered = 0;
    uint64_t dropped = 0;
    uint64_t peak_queue = 0;
  };

  struct Outcome {
    bool delivered = false;
    uint64_t depart_ns = 0;
    unsigned core = 0;
  };

  SoftwareCoreModel(unsigned cores, uint64_t per_core_pps, size_t queue_depth,
                    uint32_t hash_seed = 0);

  // Arrivals must be fed in non-decreasing time order.
  Outcome process(uint64_t arrival_ns, const FiveTuple &flow);

  unsigned cores() const { return static_cast<unsigned>(queues_.size()); }
  uint64_t service_ns() const { return service_ns_; }
  const std::vector<CoreStats> &stats() const { return stats_; }

 private:
  struct CoreQueue {
    std::deque<uint64_t> departures;  // packets still in the system
    uint64_t last_depart_ns = 0;
  };

  std::vector<CoreQueue> queues_;
  std::vector<CoreStats> stats_;
  uint64_t service_ns_;
  size_t queue_depth_;
  uint32_t hash_seed_;
};

}  // namespace gwsim

#endif  // GWSIM_SOFTPATH_HPP_
