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

#ifndef GWSIM_SERVICES_HPP_
#define GWSIM_SERVICES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gwsim/errors.hpp"

namespace gwsim {

// Service object: the consistency scope for version-based flow updates.
// The current version is read by every DPU fast path; it only changes at
// event boundaries through the control plane.
struct ServiceObject {
  uint16_t svc_id = 0;
  uint16_t version = 0;
  std::vector<std::string> bound_tables;
};

class ServiceRegistry {
 public:
  bool add(ServiceObject svc) {
    return services_.emplace(svc.svc_id, std::move(svc)).second;
  }

  bool contains(uint16_t svc_id) const { return services_.count(svc_id) > 0; }

  uint16_t version_of(uint16_t svc_id) const {
    auto it = services_.find(svc_id);
    if (it == services_.end())
      throw SimInconsistency("unregistered service " + std::to_string(svc_id));
    return it->second.version;
  }

  // Strictly increasing; wrap-around is out of scope for a run.
  uint16_t bump(uint16_t svc_id) {
    auto it = services_.find(svc_id);
    if (it == services_.end())
      throw SimInconsistency("unregistered service " + std::to_string(svc_id));
    if (it->second.version == UINT16_MAX)
      throw SimInconsistency("service version would wrap");
    return ++it->second.version;
  }

  const std::map<uint16_t, ServiceObject> &all() const { return services_; }

 private:
  std::map<uint16_t, ServiceObject> services_;
};

}  // namespace gwsim

#endif  // GWSIM_SERVICES_HPP_
