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

#ifndef GWSIM_DPU_HPP_
#define GWSIM_DPU_HPP_

#include <cstdint>
#include <list>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gwsim/disposition.hpp"
#include "gwsim/net.hpp"
#include "gwsim/packet.hpp"
#include "gwsim/services.hpp"

namespace gwsim {

// The DPU fast path is eight match-action stages; modeled as a fixed transit
// count for latency and tracing, not eight separate programmable tables.
inline constexpr unsigned kDpuMaStages = 8;

struct FlowKey {
  uint32_t vni = 0;  // 24-bit
  FiveTuple tuple;

  bool operator==(const FlowKey &) const = default;

  std::array<uint8_t, 16> bytes() const {
    std::array<uint8_t, 16> out{};
    out[0] = static_cast<uint8_t>(vni >> 16);
    out[1] = static_cast<uint8_t>(vni >> 8);
    out[2] = static_cast<uint8_t>(vni);
    auto t = tuple.bytes();
    std::copy(t.begin(), t.end(), out.begin() + 3);
    return out;
  }
};

inline uint32_t flow_key_hash(const FlowKey &k, uint32_t seed = 0) {
  auto b = k.bytes();
  return mix_hash(b.data(), b.size(), seed);
}

struct FlowKeyHasher {
  size_t operator()(const FlowKey &k) const { return flow_key_hash(k); }
};

struct FlowEntry {
  FlowKey key;
  uint32_t nexthop_index = 0;
  uint16_t version = 0;
  uint16_t svc_id = 0;
  uint64_t last_hit_ns = 0;
  uint64_t hit_count = 0;
};

struct CacheInstallOutcome {
  enum class Kind { Installed, EvictedInstalled, Rejected };

  Kind kind = Kind::Rejected;
  std::optional<FlowKey> victim;
};

// Exact-match flow cache: base hash table indexed by the documented flow-key
// hash plus an overflow map for colliding keys. Eviction is LRU by
// last-hit time, insertion order breaking ties (the recency list is the
// authority).
class FlowCache {
 public:
  explicit FlowCache(size_t capacity);

  FlowEntry *find(const FlowKey &key);
  const FlowEntry *find(const FlowKey &key) const;

  // Records a hit: bumps hit_count/last_hit_ns and refreshes recency.
  void touch(const FlowKey &key, uint64_t now_ns);

  // Insert or overwrite. At capacity the least-recently-hit entry is evicted
  // first. Rejected only when capacity is zero.
  CacheInstallOutcome insert(FlowEntry entry);

  size_t size() const { return size_; }
  size_t capacity() const { return capacity_; }
  size_t base_occupancy() const { return base_used_; }
  size_t overflow_occupancy() const { return overflow_.size(); }

  // Invariant scan used by tests: no key lives in both structures,
  // size() == base + overflow occupancy.
  bool consistent() const;

 private:
  struct Slot {
    bool used = false;
    FlowEntry entry;
  };

  size_t slot_of(const FlowKey &key) const {
    return flow_key_hash(key) % base_.size();
  }
  FlowEntry *locate(const FlowKey &key);
  void erase(const FlowKey &key);

  size_t capacity_;
  size_t size_ = 0;
  size_t base_used_ = 0;
  std::vector<Slot> base_;
  std::unordered_map<FlowKey, FlowEntry, FlowKeyHasher> overflow_;
  std::list<FlowKey> lru_;  // front = coldest
  std::unordered_map<FlowKey, std::list<FlowKey>::iterator, FlowKeyHasher>
      lru_pos_;
};

// One logical LPM-emulating table before coalescing.
struct PrefixEntry {
  Ipv4Prefix prefix;
  uint32_t action = 0;  // nexthop index
};

struct LogicalPrefixTable {
  std::string id;
  std::vector<PrefixEntry> entries;
};

// Several logical tables consolidated into one exact-match map after the
// control plane proved them conflict-free. Lookup probes each candidate
// prefix length in sequence, longest first; the first exact hit wins.
class CoalescedTable {
 public:
  static CoalescedTable build(const std::vector<LogicalPrefixTable> &tables);

  std::optional<uint32_t> lookup(uint32_t ip) const;

  const std::vector<uint8_t> &probe_lengths() const { return probe_lengths_; }
  size_t size() const { return map_.size(); }

 private:
  static uint64_t key_of(uint8_t len, uint32_t masked) {
    return static_cast<uint64_t>(len) << 32 | masked;
  }

  std::vector<uint8_t> probe_lengths_;  // strictly decreasing
  std::unordered_map<uint64_t, uint32_t> map_;
};

// Host-route lookup engine: the coalesced single table when the control
// plane accepted the plan, otherwise a per-table probe fallback with
// identical LPM semantics.
class DpuRouteEngine {
 public:
  void set_coalesced(CoalescedTable table) {
    coalesced_ = std::move(table);
    fallback_.clear();
  }
  void set_fallback(std::vector<LogicalPrefixTable> tables) {
    coalesced_.reset();
    fallback_ = std::move(tables);
  }

  bool coalesced() const { return coalesced_.has_value(); }
  std::optional<uint32_t> lookup(uint32_t ip) const;

 private:
  std::optional<CoalescedTable> coalesced_;
  std::vector<LogicalPrefixTable> fallback_;
};

// VM -> node-controller mapping, exact match on (route_table_id, vm_ip).
class VmNcTable {
 public:
  bool insert(uint16_t route_table_id, uint32_t vm_ip, uint32_t host_address) {
    return map_.emplace(key_of(route_table_id, vm_ip), host_address).second;
  }

  std::optional<uint32_t> lookup(uint16_t route_table_id,
                                 uint32_t vm_ip) const {
    auto it = map_.find(key_of(route_table_id, vm_ip));
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  size_t size() const { return map_.size(); }

 private:
  static uint64_t key_of(uint16_t rt, uint32_t ip) {
    return static_cast<uint64_t>(rt) << 32 | ip;
  }

  std::unordered_map<uint64_t, uint32_t> map_;
};

// Ordered allow/deny rules over flow-key fields; first match wins, default
// allow. Unset fields are wildcards.
struct AclRule {
  enum class Action { Allow, Deny };

  Action action = Action::Allow;
  std::optional<uint32_t> vni;
  std::optional<Ipv4Prefix> src;
  std::optional<Ipv4Prefix> dst;
  std::optional<uint8_t> proto;
  std::optional<uint16_t> src_port;
  std::optional<uint16_t> dst_port;

  bool matches(const FlowKey &k) const;
};

bool acl_permits(const std::vector<AclRule> &rules, const FlowKey &k);

struct FastPathResult {
  enum class Kind { Hit, Miss };
  enum class MissReason { NoEntry, VersionMismatch };

  Kind kind = Kind::Miss;
  uint32_t nexthop_index = 0;
  MissReason miss_reason = MissReason::NoEntry;
};

struct SlowPathDecision {
  uint32_t nexthop_index = 0;
  uint32_t host_address = 0;
  uint16_t svc_id = 0;
};

struct SlowPathOutcome {
  bool ok = false;
  SlowPathDecision decision;
  DropReason drop_reason = DropReason::AclDeny;
};

struct DpuCounters {
  uint64_t fast_hits = 0;
  uint64_t miss_no_entry = 0;
  uint64_t miss_version = 0;
  uint64_t slow_completed = 0;
  uint64_t installs = 0;
  uint64_t evictions = 0;
  uint64_t acl_denied = 0;
};

// One DPU instance: per-DPU flow cache, shared (read-only) VM-NC, host
// routes, ACL and service registry. Each instance runs in a single
// execution context; ECMP fan-out partitions flows disjointly across the
// four instances.
class DpuDatapath {
 public:
  DpuDatapath(unsigned index, size_t cache_capacity,
              const ServiceRegistry *services, const VmNcTable *vm_nc,
              const DpuRouteEngine *routes, const std::vector<AclRule> *acl)
      : index_(index),
        cache_(cache_capacity),
        services_(services),
        vm_nc_(vm_nc),
        routes_(routes),
        acl_(acl) {}

  // Requires m.path_flags TO_DPU. On a current-version hit, sets CACHE_HIT,
  // fills m.nexthop_index and refreshes the entry. Throws SimInconsistency
  // for an unregistered service.
  FastPathResult fast_path(const PacketDescriptor &p, InternalMetadata &m,
                           uint64_t now_ns);

  // ARM-core recomputation: ACL, VM-NC, host route. Sets SLOW_PATH and, on
  // success, m.nexthop_index.
  SlowPathOutcome slow_path(const PacketDescriptor &p, InternalMetadata &m);

  // Offload agent: installs the slow-path decision stamped with the
  // service's current version.
  CacheInstallOutcome offload_install(const FlowKey &key,
                                      const SlowPathDecision &decision,
                                      uint64_t now_ns);

  static FlowKey flow_key_of(const PacketDescriptor &p) {
    FlowKey k;
    k.vni = p.encap ? p.encap->vni : 0;
    k.tuple = p.inner;
    return k;
  }

  unsigned index() const { return index_; }
  FlowCache &cache() { return cache_; }
  const FlowCache &cache() const { return cache_; }
  const DpuCounters &counters() const { return counters_; }

 private:
  unsigned index_;
  FlowCache cache_;
  const ServiceRegistry *services_;
  const VmNcTable *vm_nc_;
  const DpuRouteEngine *routes_;
  const std::vector<AclRule> *acl_;
  DpuCounters counters_;
};

}  // namespace gwsim

#endif  // GWSIM_DPU_HPP_
