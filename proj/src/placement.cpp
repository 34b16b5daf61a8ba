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

#include "gwsim/placement.hpp"

#include <algorithm>

#include "gwsim/asic.hpp"
#include "gwsim/errors.hpp"

namespace gwsim {

namespace {

constexpr unsigned kTotalStages = kNumPipelines * kStagesPerPipeline;

unsigned global_index(unsigned pipeline, unsigned stage) {
  return pipeline * kStagesPerPipeline + (stage - 1);
}

unsigned pipeline_of(unsigned global) { return global / kStagesPerPipeline; }
unsigned stage_of(unsigned global) {
  return global % kStagesPerPipeline + 1;
}

std::vector<StageBudget> ordered_budgets(
    const std::vector<StageBudget> &budgets) {
  std::vector<StageBudget> out(kTotalStages);
  std::vector<bool> seen(kTotalStages, false);
  for (const auto &b : budgets) {
    if (b.pipeline >= kNumPipelines || b.stage < 1 ||
        b.stage > kStagesPerPipeline)
      throw ConfigError("budget for nonexistent stage");
    unsigned g = global_index(b.pipeline, b.stage);
    if (seen[g]) throw ConfigError("duplicate stage budget");
    seen[g] = true;
    out[g] = b;
  }
  for (unsigned g = 0; g < kTotalStages; g++)
    if (!seen[g])
      throw ConfigError("budgets must cover all " +
                        std::to_string(kTotalStages) + " stages");
  return out;
}

}  // namespace

uint64_t blocks_required(const PlacementTableSpec &table,
                         uint64_t sram_block_bits, uint64_t tcam_block_bits) {
  uint64_t block_bits =
      table.match == MatchKind::Exact ? sram_block_bits : tcam_block_bits;
  if (block_bits == 0) throw ConfigError("block capacity must be positive");
  uint64_t bits = table.entries * table.bits_per_entry;
  return (bits + block_bits - 1) / block_bits;
}

PlacementPlan place_tables(const std::vector<PlacementTableSpec> &tables,
                           const std::vector<StageBudget> &budgets,
                           uint64_t sram_block_bits,
                           uint64_t tcam_block_bits) {
  auto stage_budget = ordered_budgets(budgets);
  std::vector<uint32_t> sram_free(kTotalStages), tcam_free(kTotalStages);
  for (unsigned g = 0; g < kTotalStages; g++) {
    sram_free[g] = stage_budget[g].sram_blocks;
    tcam_free[g] = stage_budget[g].tcam_blocks;
  }

  PlacementPlan plan;
  // last occupied global stage per placed table, for dependency resolution
  std::map<std::string, unsigned> last_stage;

  for (const auto &table : tables) {
    if (plan.slices.count(table.id))
      throw ConfigError("duplicate table id " + table.id);

    unsigned start = 0;
    for (const auto &dep : table.deps) {
      auto it = last_stage.find(dep);
      if (it == last_stage.end())
        throw ConfigError("table " + table.id + " depends on " + dep +
                          " which is not placed before it");
      start = std::max(start, it->second + 1);  // match dependency: next stage
    }

    uint64_t remaining = blocks_required(table, sram_block_bits,
                                         tcam_block_bits);
    bool uses_sram = table.match == MatchKind::Exact;
    std::vector<PlacementSlice> slices;
    unsigned last = start;
    for (unsigned g = start; g < kTotalStages && remaining > 0; g++) {
      uint32_t &free = uses_sram ? sram_free[g] : tcam_free[g];
      if (free == 0) continue;
      uint32_t take = static_cast<uint32_t>(
          std::min<uint64_t>(remaining, free));
      free -= take;
      remaining -= take;
      PlacementSlice s;
      s.pipeline = pipeline_of(g);
      s.stage = stage_of(g);
      if (uses_sram)
        s.sram_blocks = take;
      else
        s.tcam_blocks = take;
      slices.push_back(s);
      last = g;
    }
    if (remaining > 0)
      throw PlacementError(table.id, "table " + table.id + " does not fit (" +
                                         std::to_string(remaining) +
                                         " blocks short)");
    // Zero-block tables still bind a stage for their dependents.
    if (slices.empty()) {
      PlacementSlice s;
      s.pipeline = pipeline_of(std::min(start, kTotalStages - 1));
      s.stage = stage_of(std::min(start, kTotalStages - 1));
      slices.push_back(s);
      last = std::min(start, kTotalStages - 1);
    }
    last_stage[table.id] = last;
    plan.slices.emplace(table.id, std::move(slices));
  }
  return plan;
}

UtilizationReport compute_utilization(
    const PlacementPlan &plan, const std::vector<PlacementTableSpec> &tables,
    const std::vector<StageBudget> &budgets) {
  auto stage_budget = ordered_budgets(budgets);
  std::map<std::string, const PlacementTableSpec *> by_id;
  for (const auto &t : tables) by_id[t.id] = &t;

  std::vector<StageUtilization> util(kTotalStages);
  for (const auto &[id, slices] : plan.slices) {
    auto it = by_id.find(id);
    const PlacementTableSpec *spec =
        it == by_id.end() ? nullptr : it->second;
    for (const auto &s : slices) {
      unsigned g = global_index(s.pipeline, s.stage);
      util[g].sram_used += s.sram_blocks;
      util[g].tcam_used += s.tcam_blocks;
      if (spec) {
        util[g].phv8_used += spec->phv.b8;
        util[g].phv16_used += spec->phv.b16;
        util[g].phv32_used += spec->phv.b32;
      }
    }
  }

  UtilizationReport report;
  auto pct = [](uint32_t used, uint32_t budget) {
    return budget == 0 ? 0.0 : 100.0 * used / budget;
  };
  for (unsigned g = 0; g < kTotalStages; g++) {
    const auto &b = stage_budget[g];
    StageUtilization &u = util[g];
    u.sram_pct = pct(u.sram_used, b.sram_blocks);
    u.tcam_pct = pct(u.tcam_used, b.tcam_blocks);
    u.phv8_pct = pct(u.phv8_used, b.phv8);
    u.phv16_pct = pct(u.phv16_used, b.phv16);
    u.phv32_pct = pct(u.phv32_used, b.phv32);
    report.stages[{pipeline_of(g), stage_of(g)}] = u;
  }
  for (unsigned p = 0; p < kNumPipelines; p++) {
    PipelineSummary sum;
    unsigned sram_sat = 0, tcam_sat = 0;
    for (unsigned s = 1; s <= kStagesPerPipeline; s++) {
      const auto &u = report.stages[{p, s}];
      sum.sram_mean_pct += u.sram_pct;
      sum.tcam_mean_pct += u.tcam_pct;
      if (u.sram_pct > kSaturationThresholdPct) sram_sat++;
      if (u.tcam_pct > kSaturationThresholdPct) tcam_sat++;
    }
    sum.sram_mean_pct /= kStagesPerPipeline;
    sum.tcam_mean_pct /= kStagesPerPipeline;
    sum.sram_saturation_fraction =
        static_cast<double>(sram_sat) / kStagesPerPipeline;
    sum.tcam_saturation_fraction =
        static_cast<double>(tcam_sat) / kStagesPerPipeline;
    report.pipelines[p] = sum;
  }
  return report;
}

bool validate_plan(const PlacementPlan &plan,
                   const std::vector<PlacementTableSpec> &tables,
                   const std::vector<StageBudget> &budgets, std::string *why) {
  auto fail = [&](const std::string &msg) {
    if (why) *why = msg;
    return false;
  };
  auto stage_budget = ordered_budgets(budgets);
  std::vector<uint64_t> sram(kTotalStages, 0), tcam(kTotalStages, 0);
  std::map<std::string, std::pair<unsigned, unsigned>> span;  // first,last
  for (const auto &[id, slices] : plan.slices) {
    if (slices.empty()) return fail("table " + id + " has no slices");
    unsigned first = kTotalStages, last = 0;
    for (const auto &s : slices) {
      unsigned g = global_index(s.pipeline, s.stage);
      sram[g] += s.sram_blocks;
      tcam[g] += s.tcam_blocks;
      first = std::min(first, g);
      last = std::max(last, g);
    }
    span[id] = {first, last};
  }
  for (unsigned g = 0; g < kTotalStages; g++) {
    if (sram[g] > stage_budget[g].sram_blocks)
      return fail("SRAM over budget at pipeline " +
                  std::to_string(pipeline_of(g)) + " stage " +
                  std::to_string(stage_of(g)));
    if (tcam[g] > stage_budget[g].tcam_blocks)
      return fail("TCAM over budget at pipeline " +
                  std::to_string(pipeline_of(g)) + " stage " +
                  std::to_string(stage_of(g)));
  }
  for (const auto &t : tables) {
    auto it = span.find(t.id);
    if (it == span.end()) continue;
    for (const auto &dep : t.deps) {
      auto dit = span.find(dep);
      if (dit == span.end()) return fail("dependency " + dep + " unplaced");
      if (it->second.first < dit->second.first)
        return fail("table " + t.id + " placed before dependency " + dep);
    }
  }
  return true;
}

nlohmann::ordered_json placement_to_json(const PlacementPlan &plan,
                                         const UtilizationReport &report) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const auto &[id, slices] : plan.slices) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &s : slices) {
      arr.push_back({{"pipeline", s.pipeline},
                     {"stage", s.stage},
                     {"sram_blocks", s.sram_blocks},
                     {"tcam_blocks", s.tcam_blocks}});
    }
    tables[id] = std::move(arr);
  }
  j["plan"] = std::move(tables);

  nlohmann::ordered_json pipelines = nlohmann::ordered_json::object();
  for (unsigned p = 0; p < kNumPipelines; p++) {
    nlohmann::ordered_json stages = nlohmann::ordered_json::object();
    for (unsigned s = 1; s <= kStagesPerPipeline; s++) {
      auto it = report.stages.find({p, s});
      if (it == report.stages.end()) continue;
      const auto &u = it->second;
      stages["stage" + std::to_string(s)] = {
          {"sram_pct", u.sram_pct},   {"tcam_pct", u.tcam_pct},
          {"phv8_pct", u.phv8_pct},   {"phv16_pct", u.phv16_pct},
          {"phv32_pct", u.phv32_pct},
      };
    }
    auto pit = report.pipelines.find(p);
    nlohmann::ordered_json entry;
    entry["stages"] = std::move(stages);
    if (pit != report.pipelines.end()) {
      entry["sram_mean_pct"] = pit->second.sram_mean_pct;
      entry["tcam_mean_pct"] = pit->second.tcam_mean_pct;
      entry["sram_saturation_fraction"] =
          pit->second.sram_saturation_fraction;
      entry["tcam_saturation_fraction"] =
          pit->second.tcam_saturation_fraction;
    }
    pipelines["pipeline" + std::to_string(p)] = std::move(entry);
  }
  j["utilization"] = std::move(pipelines);
  return j;
}

}  // namespace gwsim
