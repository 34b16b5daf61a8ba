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

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gwsim/sim.hpp"

namespace {

// Exit codes: 0 ok, 2 config error, 3 I/O error, 4 internal error.
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

bool ends_with(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gwsim::IoError("cannot open " + path);
  out << content;
  if (!out) throw gwsim::IoError("write failed: " + path);
}

int cmd_run(const std::string &config_path, std::optional<uint64_t> seed,
            const std::string &trace_path, const std::string &metrics_path) {
  gwsim::ScenarioConfig cfg = gwsim::load_scenario_file(config_path);
  if (seed) cfg.seed = *seed;

  std::unique_ptr<gwsim::JsonlTraceWriter> tracer;
  if (!trace_path.empty())
    tracer = std::make_unique<gwsim::JsonlTraceWriter>(trace_path);

  gwsim::Simulation sim(std::move(cfg));
  gwsim::RunMetrics metrics = sim.run(tracer.get());
  if (tracer) tracer->flush();

  std::string json = metrics.to_json().dump(2) + "\n";
  if (metrics_path.empty()) {
    std::cout << json;
  } else if (ends_with(metrics_path, ".csv")) {
    write_file(metrics_path, metrics.to_csv());
  } else {
    write_file(metrics_path, json);
  }
  return 0;
}

int cmd_placement(const std::string &config_path) {
  gwsim::ScenarioConfig cfg = gwsim::load_scenario_file(config_path);
  if (!cfg.placement)
    throw gwsim::ConfigError("scenario has no placement section");
  const auto &p = *cfg.placement;
  auto budgets = p.budgets();
  gwsim::PlacementPlan plan = gwsim::place_tables(
      p.tables, budgets, p.sram_block_bits, p.tcam_block_bits);
  auto report = gwsim::compute_utilization(plan, p.tables, budgets);
  std::cout << gwsim::placement_to_json(plan, report).dump(2) << "\n";
  return 0;
}

int cmd_oracle_check(const std::string &rules_path) {
  auto tables = gwsim::load_rules_file(rules_path);
  gwsim::CoalescePlan plan = gwsim::coalesce_tables(tables);
  std::cout << gwsim::coalesce_plan_to_json(plan).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"heterogeneous cloud gateway simulator"};
  app.require_subcommand(1);

  std::string config_path, rules_path, trace_path, metrics_path;
  std::optional<uint64_t> seed;

  auto *run = app.add_subcommand("run", "execute a scenario");
  run->add_option("--config", config_path, "scenario file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--trace", trace_path, "write per-packet JSONL trace");
  run->add_option("--metrics", metrics_path,
                  "write metrics (.json or .csv); stdout if omitted");

  auto *placement = app.add_subcommand("placement", "compute table placement");
  placement->add_option("--config", config_path, "scenario file")->required();

  auto *oracle =
      app.add_subcommand("oracle-check", "coalescing verdict for a rules file");
  oracle->add_option("--rules", rules_path, "rules file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, seed, trace_path, metrics_path);
    if (placement->parsed()) return cmd_placement(config_path);
    if (oracle->parsed()) return cmd_oracle_check(rules_path);
  } catch (const gwsim::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gwsim::PlacementError &e) {
    std::cerr << "placement error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gwsim::IoError &e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
