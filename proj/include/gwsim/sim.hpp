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

#ifndef GWSIM_SIM_HPP_
#define GWSIM_SIM_HPP_

#include <memory>

#include "gwsim/control.hpp"
#include "gwsim/metrics.hpp"
#include "gwsim/scenario.hpp"
#include "gwsim/softpath.hpp"
#include "gwsim/trace.hpp"
#include "gwsim/workload.hpp"

namespace gwsim {

// Deterministic single-context event loop over the whole gateway. Table
// installation happens in the constructor (ConfigError surfaces before any
// packet moves); control events apply between packets only.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg);

  RunMetrics run(TraceSink *sink = nullptr);

  Gateway &gateway() { return *gateway_; }
  ControlPlane &control_plane() { return *control_; }
  const ScenarioConfig &config() const { return cfg_; }
  const CoalescePlan &coalesce_plan() const { return coalesce_plan_; }

 private:
  struct PacketContext;

  void install_tables();
  void process_hardware(PacketContext &ctx, RunMetrics &m);
  void process_software(PacketContext &ctx, SoftwareCoreModel &model,
                        RunMetrics &m);

  ScenarioConfig cfg_;
  std::unique_ptr<Gateway> gateway_;
  std::unique_ptr<ControlPlane> control_;
  CoalescePlan coalesce_plan_;
};

// Convenience wrapper: build and run in one call.
RunMetrics run_scenario(ScenarioConfig cfg, TraceSink *sink = nullptr);

}  // namespace gwsim

#endif  // GWSIM_SIM_HPP_
