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

#include "gwsim/softpath.hpp"

#include <algorithm>

#include "gwsim/errors.hpp"

namespace gwsim {

SoftwareCoreModel::SoftwareCoreModel(unsigned cores, uint64_t per_core_pps,
                                     size_t queue_depth, uint32_t hash_seed)
    : queues_(cores),
      stats_(cores),
      queue_depth_(queue_depth),
      hash_seed_(hash_seed) {
  if (cores == 0) throw ConfigError("software model needs at least one core");
  if (per_core_pps == 0 || per_core_pps > 1'000'000'000ULL)
    throw ConfigError("per-core pps out of range");
  if (queue_depth == 0) throw ConfigError("queue depth must be positive");
  service_ns_ = 1'000'000'000ULL / per_core_pps;
  if (service_ns_ == 0) service_ns_ = 1;
}

SoftwareCoreModel::Outcome SoftwareCoreModel::process(uint64_t arrival_ns,
                                                      const FiveTuple &flow) {
  unsigned core = five_tuple_hash(flow, hash_seed_) % queues_.size();
  CoreQueue &q = queues_[core];
  CoreStats &st = stats_[core];

  while (!q.departures.empty() && q.departures.front() <= arrival_ns)
    q.departures.pop_front();

  Outcome out;
  out.core = core;
  if (q.departures.size() >= queue_depth_) {
    st.dropped++;
    out.delivered = false;
    return out;
  }

  uint64_t start = std::max(arrival_ns, q.last_depart_ns);
  uint64_t depart = start + service_ns_;
  q.last_depart_ns = depart;
  q.departures.push_back(depart);
  st.peak_queue = std::max<uint64_t>(st.peak_queue, q.departures.size());
  st.delivered++;
  out.delivered = true;
  out.depart_ns = depart;
  return out;
}

}  // namespace gwsim
