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

#include "gwsim/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "gwsim/errors.hpp"

namespace gwsim {

const std::vector<uint64_t> &LatencyHistogram::edges() {
  static const std::vector<uint64_t> kEdges = [] {
    std::vector<uint64_t> e;
    uint64_t edge = 100;
    while (true) {
      e.push_back(edge);
      if (edge >= 10'000'000'000ULL) break;
      edge = std::max(edge + 1, edge * 5 / 4);
    }
    return e;
  }();
  return kEdges;
}

std::pair<uint64_t, uint64_t> LatencyHistogram::bucket_bounds(size_t i) {
  const auto &e = edges();
  uint64_t lo = i == 0 ? 0 : e[i - 1];
  uint64_t hi = i < e.size() ? e[i] : UINT64_MAX;
  return {lo, hi};
}

LatencyHistogram::LatencyHistogram() : buckets_(bucket_count(), 0) {}

void LatencyHistogram::add(uint64_t ns) {
  const auto &e = edges();
  size_t idx = std::upper_bound(e.begin(), e.end(), ns) - e.begin();
  buckets_[idx]++;
  count_++;
  sum_ += ns;
  min_ = std::min(min_, ns);
  max_ = std::max(max_, ns);
}

uint64_t LatencyHistogram::quantile_ns(double q) const {
  if (count_ == 0) return 0;
  uint64_t rank = static_cast<uint64_t>(q * static_cast<double>(count_));
  if (rank >= count_) rank = count_ - 1;
  uint64_t seen = 0;
  for (size_t i = 0; i < buckets_.size(); i++) {
    seen += buckets_[i];
    if (seen > rank) return bucket_bounds(i).first;
  }
  return bucket_bounds(buckets_.size() - 1).first;
}

nlohmann::ordered_json LatencyHistogram::to_json() const {
  nlohmann::ordered_json j;
  j["count"] = count_;
  j["sum_ns"] = sum_;
  j["min_ns"] = min_ns();
  j["max_ns"] = max_;
  j["mean_ns"] = mean_ns();
  j["p99_ns"] = p99_ns();
  // sparse: only non-empty buckets, as [index, count]
  nlohmann::ordered_json buckets = nlohmann::ordered_json::array();
  for (size_t i = 0; i < buckets_.size(); i++) {
    if (buckets_[i] != 0)
      buckets.push_back({i, buckets_[i]});
  }
  j["buckets"] = std::move(buckets);
  return j;
}

LatencyHistogram LatencyHistogram::from_json(const nlohmann::json &j) {
  LatencyHistogram h;
  h.count_ = j.at("count").get<uint64_t>();
  h.sum_ = j.at("sum_ns").get<uint64_t>();
  uint64_t mn = j.at("min_ns").get<uint64_t>();
  h.min_ = h.count_ == 0 ? UINT64_MAX : mn;
  h.max_ = j.at("max_ns").get<uint64_t>();
  for (const auto &b : j.at("buckets")) {
    size_t idx = b.at(0).get<size_t>();
    if (idx >= h.buckets_.size()) throw ConfigError("bad histogram bucket");
    h.buckets_[idx] = b.at(1).get<uint64_t>();
  }
  return h;
}

namespace {

nlohmann::ordered_json dpu_to_json(const DpuCacheStats &d) {
  return {{"packets", d.packets},
          {"fast_hits", d.fast_hits},
          {"miss_no_entry", d.miss_no_entry},
          {"miss_version", d.miss_version},
          {"installs", d.installs},
          {"evictions", d.evictions},
          {"occupancy", d.occupancy},
          {"capacity", d.capacity}};
}

DpuCacheStats dpu_from_json(const nlohmann::json &j) {
  DpuCacheStats d;
  d.packets = j.at("packets").get<uint64_t>();
  d.fast_hits = j.at("fast_hits").get<uint64_t>();
  d.miss_no_entry = j.at("miss_no_entry").get<uint64_t>();
  d.miss_version = j.at("miss_version").get<uint64_t>();
  d.installs = j.at("installs").get<uint64_t>();
  d.evictions = j.at("evictions").get<uint64_t>();
  d.occupancy = j.at("occupancy").get<uint64_t>();
  d.capacity = j.at("capacity").get<uint64_t>();
  return d;
}

}  // namespace

nlohmann::ordered_json RunMetrics::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["injected"] = injected;
  j["delivered"] = delivered;
  j["punted"] = punted;
  j["dropped_total"] = dropped_total;
  j["dropped_by_reason"] = dropped_by_reason;
  j["paths"] = {{"asic_only", path_asic_only},
                {"fast_hit", path_fast_hit},
                {"slow_path", path_slow},
                {"software", path_software}};
  j["slow_no_entry"] = slow_no_entry;
  j["slow_version_mismatch"] = slow_version_mismatch;
  nlohmann::ordered_json per_svc = nlohmann::ordered_json::object();
  for (const auto &[svc, n] : slow_by_service)
    per_svc[std::to_string(svc)] = n;
  j["slow_by_service"] = std::move(per_svc);
  j["offload_ratio"] = offload_ratio;
  j["latency"] = {{"all", latency_all.to_json()},
                  {"asic_only", latency_asic_only.to_json()},
                  {"fast_hit", latency_fast_hit.to_json()},
                  {"slow_path", latency_slow.to_json()},
                  {"software", latency_software.to_json()}};
  nlohmann::ordered_json dpu_arr = nlohmann::ordered_json::array();
  for (const auto &d : dpus) dpu_arr.push_back(dpu_to_json(d));
  j["dpus"] = std::move(dpu_arr);
  nlohmann::ordered_json core_arr = nlohmann::ordered_json::array();
  for (const auto &c : sw_cores)
    core_arr.push_back({{"delivered", c.delivered},
                        {"dropped", c.dropped},
                        {"peak_queue", c.peak_queue}});
  j["sw_cores"] = std::move(core_arr);
  return j;
}

RunMetrics RunMetrics::from_json(const nlohmann::json &j) {
  RunMetrics m;
  m.injected = j.at("injected").get<uint64_t>();
  m.delivered = j.at("delivered").get<uint64_t>();
  m.punted = j.at("punted").get<uint64_t>();
  m.dropped_total = j.at("dropped_total").get<uint64_t>();
  m.dropped_by_reason =
      j.at("dropped_by_reason").get<std::map<std::string, uint64_t>>();
  const auto &paths = j.at("paths");
  m.path_asic_only = paths.at("asic_only").get<uint64_t>();
  m.path_fast_hit = paths.at("fast_hit").get<uint64_t>();
  m.path_slow = paths.at("slow_path").get<uint64_t>();
  m.path_software = paths.at("software").get<uint64_t>();
  m.slow_no_entry = j.at("slow_no_entry").get<uint64_t>();
  m.slow_version_mismatch = j.at("slow_version_mismatch").get<uint64_t>();
  for (const auto &[k, v] : j.at("slow_by_service").items())
    m.slow_by_service[static_cast<uint16_t>(std::stoul(k))] =
        v.get<uint64_t>();
  m.offload_ratio = j.at("offload_ratio").get<double>();
  const auto &lat = j.at("latency");
  m.latency_all = LatencyHistogram::from_json(lat.at("all"));
  m.latency_asic_only = LatencyHistogram::from_json(lat.at("asic_only"));
  m.latency_fast_hit = LatencyHistogram::from_json(lat.at("fast_hit"));
  m.latency_slow = LatencyHistogram::from_json(lat.at("slow_path"));
  m.latency_software = LatencyHistogram::from_json(lat.at("software"));
  for (const auto &d : j.at("dpus")) m.dpus.push_back(dpu_from_json(d));
  for (const auto &c : j.at("sw_cores")) {
    SwCoreMetrics s;
    s.delivered = c.at("delivered").get<uint64_t>();
    s.dropped = c.at("dropped").get<uint64_t>();
    s.peak_queue = c.at("peak_queue").get<uint64_t>();
    m.sw_cores.push_back(s);
  }
  return m;
}

std::string RunMetrics::to_csv() const {
  std::ostringstream out;
  out << "counter,injected," << injected << "\n";
  out << "counter,delivered," << delivered << "\n";
  out << "counter,punted," << punted << "\n";
  out << "counter,dropped," << dropped_total << "\n";
  out << "counter,asic_only," << path_asic_only << "\n";
  out << "counter,fast_hit," << path_fast_hit << "\n";
  out << "counter,slow_path," << path_slow << "\n";
  out << "counter,software," << path_software << "\n";
  out << "counter,slow_no_entry," << slow_no_entry << "\n";
  out << "counter,slow_version_mismatch," << slow_version_mismatch << "\n";
  out << "counter,offload_ratio," << offload_ratio << "\n";
  for (size_t i = 0; i < dpus.size(); i++)
    out << "dpu," << i << "," << dpus[i].packets << "\n";
  for (size_t i = 0; i < latency_all.buckets().size(); i++) {
    auto [lo, hi] = LatencyHistogram::bucket_bounds(i);
    out << "hist," << lo << "," << hi << "," << latency_all.buckets()[i]
        << "\n";
  }
  return out.str();
}

}  // namespace gwsim
