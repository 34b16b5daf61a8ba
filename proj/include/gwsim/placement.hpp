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

#ifndef GWSIM_PLACEMENT_HPP_
#define GWSIM_PLACEMENT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace gwsim {

enum class MatchKind { Exact, Lpm };

struct PhvDemand {
  uint32_t b8 = 0;
  uint32_t b16 = 0;
  uint32_t b32 = 0;
};

struct PlacementTableSpec {
  std::string id;
  MatchKind match = MatchKind::Exact;
  uint64_t entries = 0;
  uint32_t bits_per_entry = 0;
  std::vector<std::string> deps;  // direct match dependencies
  PhvDemand phv;
};

struct StageBudget {
  unsigned pipeline = 0;  // 0..3
  unsigned stage = 1;     // 1..12
  uint32_t sram_blocks = 0;
  uint32_t tcam_blocks = 0;
  uint32_t phv8 = 0;
  uint32_t phv16 = 0;
  uint32_t phv32 = 0;
};

struct PlacementSlice {
  unsigned pipeline = 0;
  unsigned stage = 1;
  uint32_t sram_blocks = 0;
  uint32_t tcam_blocks = 0;
};

struct PlacementPlan {
  // table id -> occupied slices, in stage order
  std::map<std::string, std::vector<PlacementSlice>> slices;
};

// First-fit placement over the folded pipeline (pipeline-major stage order).
// Exact-match tables consume SRAM blocks = ceil(entries*bits / sram_block_bits),
// LPM tables consume TCAM blocks analogously. A table with match dependencies
// begins in the stage after the last stage any of its dependencies occupies;
// a dependency-free table backfills from the first stage. Throws
// PlacementError naming the first table that cannot fit, ConfigError on
// malformed input (unknown dep, incomplete budgets).
PlacementPlan place_tables(const std::vector<PlacementTableSpec> &tables,
                           const std::vector<StageBudget> &budgets,
                           uint64_t sram_block_bits, uint64_t tcam_block_bits);

uint64_t blocks_required(const PlacementTableSpec &table,
                         uint64_t sram_block_bits, uint64_t tcam_block_bits);

struct StageUtilization {
  uint32_t sram_used = 0;
  uint32_t tcam_used = 0;
  uint32_t phv8_used = 0;
  uint32_t phv16_used = 0;
  uint32_t phv32_used = 0;
  double sram_pct = 0.0;
  double tcam_pct = 0.0;
  double phv8_pct = 0.0;
  double phv16_pct = 0.0;
  double phv32_pct = 0.0;
};

struct PipelineSummary {
  double sram_mean_pct = 0.0;
  double tcam_mean_pct = 0.0;
  // Share of stages above the 95% saturation threshold.
  double sram_saturation_fraction = 0.0;
  double tcam_saturation_fraction = 0.0;
};

struct UtilizationReport {
  // keyed (pipeline, stage)
  std::map<std::pair<unsigned, unsigned>, StageUtilization> stages;
  std::map<unsigned, PipelineSummary> pipelines;
};

inline constexpr double kSaturationThresholdPct = 95.0;

// PHV is accounted as declared per-table demand in every stage the table
// occupies; it is reported, never a placement constraint.
UtilizationReport compute_utilization(
    const PlacementPlan &plan, const std::vector<PlacementTableSpec> &tables,
    const std::vector<StageBudget> &budgets);

// Direct-scan soundness check: no stage over budget, dependency order
// non-decreasing. Used by tests and the CLI.
bool validate_plan(const PlacementPlan &plan,
                   const std::vector<PlacementTableSpec> &tables,
                   const std::vector<StageBudget> &budgets,
                   std::string *why = nullptr);

nlohmann::ordered_json placement_to_json(
    const PlacementPlan &plan, const UtilizationReport &report);

}  // namespace gwsim

#endif  // GWSIM_PLACEMENT_HPP_
