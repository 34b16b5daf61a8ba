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

#ifndef GWSIM_METRICS_HPP_
#define GWSIM_METRICS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace gwsim {

// Latency histogram with fixed geometric buckets: [0,100ns), then edges
// growing by exactly 5/4 (integer floor) until 10 seconds, plus overflow.
// Bucket edges are integers and identical in every build.
class LatencyHistogram {
 public:
  LatencyHistogram();

  void add(uint64_t ns);

  uint64_t count() const { return count_; }
  uint64_t sum_ns() const { return sum_; }
  uint64_t min_ns() const { return count_ ? min_ : 0; }
  uint64_t max_ns() const { return max_; }
  double mean_ns() const {
    return count_ == 0 ? 0.0 : static_cast<double>(sum_) / count_;
  }

  // Lower edge of the bucket holding the q-quantile sample (documented
  // approximation; means are exact).
  uint64_t quantile_ns(double q) const;
  uint64_t p99_ns() const { return quantile_ns(0.99); }

  const std::vector<uint64_t> &buckets() const { return buckets_; }

  // Shared bucket geometry.
  static const std::vector<uint64_t> &edges();
  static size_t bucket_count() { return edges().size() + 1; }
  // [lo, hi) bounds of bucket i; the last bucket's hi is UINT64_MAX.
  static std::pair<uint64_t, uint64_t> bucket_bounds(size_t i);

  bool operator==(const LatencyHistogram &o) const {
    return count_ == o.count_ && sum_ == o.sum_ && min_ == o.min_ &&
           max_ == o.max_ && buckets_ == o.buckets_;
  }

  nlohmann::ordered_json to_json() const;
  static LatencyHistogram from_json(const nlohmann::json &j);

 private:
  std::vector<uint64_t> buckets_;
  uint64_t count_ = 0;
  uint64_t sum_ = 0;
  uint64_t min_ = UINT64_MAX;
  uint64_t max_ = 0;
};

struct DpuCacheStats {
  uint64_t packets = 0;
  uint64_t fast_hits = 0;
  uint64_t miss_no_entry = 0;
  uint64_t miss_version = 0;
  uint64_t installs = 0;
  uint64_t evictions = 0;
  uint64_t occupancy = 0;
  uint64_t capacity = 0;

  bool operator==(const DpuCacheStats &) const = default;
};

struct SwCoreMetrics {
  uint64_t delivered = 0;
  uint64_t dropped = 0;
  uint64_t peak_queue = 0;

  bool operator==(const SwCoreMetrics &) const = default;
};

struct RunMetrics {
  uint64_t injected = 0;
  uint64_t delivered = 0;
  uint64_t punted = 0;
  uint64_t dropped_total = 0;
  std::map<std::string, uint64_t> dropped_by_reason;

  uint64_t path_asic_only = 0;
  uint64_t path_fast_hit = 0;
  uint64_t path_slow = 0;
  uint64_t path_software = 0;

  uint64_t slow_no_entry = 0;
  uint64_t slow_version_mismatch = 0;
  std::map<uint16_t, uint64_t> slow_by_service;

  double offload_ratio = 0.0;

  LatencyHistogram latency_all;
  LatencyHistogram latency_asic_only;
  LatencyHistogram latency_fast_hit;
  LatencyHistogram latency_slow;
  LatencyHistogram latency_software;

  std::vector<DpuCacheStats> dpus;
  std::vector<SwCoreMetrics> sw_cores;

  bool conservation_holds() const {
    return injected == delivered + dropped_total + punted;
  }

  bool operator==(const RunMetrics &) const = default;

  nlohmann::ordered_json to_json() const;
  static RunMetrics from_json(const nlohmann::json &j);

  // CSV: fixed scalar counter rows, one row per DPU, then the overall
  // histogram with one bucket per row. Total rows =
  // kCsvCounterRows + dpus.size() + LatencyHistogram::bucket_count().
  std::string to_csv() const;

  static constexpr size_t kCsvCounterRows = 11;
};

}  // namespace gwsim

#endif  // GWSIM_METRICS_HPP_
