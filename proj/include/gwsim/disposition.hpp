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

#ifndef GWSIM_DISPOSITION_HPP_
#define GWSIM_DISPOSITION_HPP_

namespace gwsim {

enum class DropReason {
  NoClassification,  // unknown traffic class, default deny
  TenantMiss,        // VNI not bound to a policy-routing table
  RouteMiss,         // no LPM entry for the inner destination
  NexthopMiss,       // dangling nexthop index (control-plane inconsistency)
  AclDeny,
  VmNcMiss,          // destination VM not in the VM-NC table
  DpuRouteMiss,      // VM host has no DPU host-route entry
  SwQueueOverflow,   // software core queue full
};

const char *drop_reason_name(DropReason r);

// Final classification of one packet. Hardware variants produce only the
// first five; Software is the SoftwareOnly variant's delivery path.
enum class Disposition {
  AsicOnly,
  FastHit,
  SlowPath,
  PuntToCpu,
  Drop,
  Software,
};

const char *disposition_name(Disposition d);

}  // namespace gwsim

#endif  // GWSIM_DISPOSITION_HPP_
