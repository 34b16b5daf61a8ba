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

#include "gwsim/dpu.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace gwsim {

// --- FlowCache -------------------------------------------------------------

FlowCache::FlowCache(size_t capacity)
    : capacity_(capacity), base_(std::max<size_t>(capacity, 1)) {}

FlowEntry *FlowCache::locate(const FlowKey &key) {
  Slot &slot = base_[slot_of(key)];
  if (slot.used && slot.entry.key == key) return &slot.entry;
  auto it = overflow_.find(key);
  return it == overflow_.end() ? nullptr : &it->second;
}

FlowEntry *FlowCache::find(const FlowKey &key) { return locate(key); }

const FlowEntry *FlowCache::find(const FlowKey &key) const {
  return const_cast<FlowCache *>(this)->locate(key);
}

void FlowCache::touch(const FlowKey &key, uint64_t now_ns) {
  FlowEntry *e = locate(key);
  if (!e) return;
  e->last_hit_ns = now_ns;
  e->hit_count++;
  auto it = lru_pos_.find(key);
  lru_.splice(lru_.end(), lru_, it->second);  // most recent at the back
}

void FlowCache::erase(const FlowKey &key) {
  Slot &slot = base_[slot_of(key)];
  if (slot.used && slot.entry.key == key) {
    slot.used = false;
    base_used_--;
  } else {
    overflow_.erase(key);
  }
  auto it = lru_pos_.find(key);
  if (it != lru_pos_.end()) {
    lru_.erase(it->second);
    lru_pos_.erase(it);
  }
  size_--;
}

CacheInstallOutcome FlowCache::insert(FlowEntry entry) {
  CacheInstallOutcome out;
  if (capacity_ == 0) {
    out.kind = CacheInstallOutcome::Kind::Rejected;
    return out;
  }

  if (FlowEntry *existing = locate(entry.key)) {
    // Reinstall-overwrite (e.g. after a version bump); recency refreshed.
    *existing = entry;
    auto it = lru_pos_.find(entry.key);
    lru_.splice(lru_.end(), lru_, it->second);
    out.kind = CacheInstallOutcome::Kind::Installed;
    return out;
  }

  if (size_ >= capacity_) {
    FlowKey victim = lru_.front();
    erase(victim);
    out.victim = victim;
    out.kind = CacheInstallOutcome::Kind::EvictedInstalled;
  } else {
    out.kind = CacheInstallOutcome::Kind::Installed;
  }

  FlowKey key = entry.key;
  Slot &slot = base_[slot_of(key)];
  if (!slot.used) {
    slot.used = true;
    slot.entry = std::move(entry);
    base_used_++;
  } else {
    overflow_.emplace(key, std::move(entry));
  }
  lru_pos_[key] = lru_.insert(lru_.end(), key);
  size_++;
  return out;
}

bool FlowCache::consistent() const {
  if (size_ != base_used_ + overflow_.size()) return false;
  if (size_ != lru_.size() || size_ != lru_pos_.size()) return false;
  if (size_ > capacity_) return false;
  for (const auto &slot : base_) {
    if (slot.used && overflow_.count(slot.entry.key)) return false;
  }
  return true;
}

// --- CoalescedTable ----------------------------------------------------------

CoalescedTable CoalescedTable::build(
    const std::vector<LogicalPrefixTable> &tables) {
  CoalescedTable ct;
  std::set<uint8_t, std::greater<uint8_t>> lengths;
  for (const auto &t : tables) {
    for (const auto &e : t.entries) {
      lengths.insert(e.prefix.len);
      ct.map_[key_of(e.prefix.len, e.prefix.addr)] = e.action;
    }
  }
  ct.probe_lengths_.assign(lengths.begin(), lengths.end());
  return ct;
}

std::optional<uint32_t> CoalescedTable::lookup(uint32_t ip) const {
  for (uint8_t len : probe_lengths_) {
    auto it = map_.find(key_of(len, ip & Ipv4Prefix::mask_for(len)));
    if (it != map_.end()) return it->second;
  }
  return std::nullopt;
}

std::optional<uint32_t> DpuRouteEngine::lookup(uint32_t ip) const {
  if (coalesced_) return coalesced_->lookup(ip);
  // Uncoalesced: probe every logical table, keep the longest match.
  std::optional<uint32_t> best;
  int best_len = -1;
  for (const auto &t : fallback_) {
    for (const auto &e : t.entries) {
      if (e.prefix.matches(ip) && e.prefix.len > best_len) {
        best_len = e.prefix.len;
        best = e.action;
      }
    }
  }
  return best;
}

// --- ACL ---------------------------------------------------------------------

bool AclRule::matches(const FlowKey &k) const {
  if (vni && *vni != k.vni) return false;
  if (src && !src->matches(k.tuple.src_ip)) return false;
  if (dst && !dst->matches(k.tuple.dst_ip)) return false;
  if (proto && *proto != k.tuple.proto) return false;
  if (src_port && *src_port != k.tuple.src_port) return false;
  if (dst_port && *dst_port != k.tuple.dst_port) return false;
  return true;
}

bool acl_permits(const std::vector<AclRule> &rules, const FlowKey &k) {
  for (const auto &r : rules) {
    if (r.matches(k)) return r.action == AclRule::Action::Allow;
  }
  return true;  // default allow
}

// --- DpuDatapath ---------------------------------------------------------------

FastPathResult DpuDatapath::fast_path(const PacketDescriptor &p,
                                      InternalMetadata &m, uint64_t now_ns) {
  assert(m.path_flags & path_flags::kToDpu);
  FastPathResult r;

  uint16_t current = services_->version_of(m.svc_id);  // throws if unknown
  FlowKey key = flow_key_of(p);
  FlowEntry *entry = cache_.find(key);
  if (!entry) {
    r.kind = FastPathResult::Kind::Miss;
    r.miss_reason = FastPathResult::MissReason::NoEntry;
    counters_.miss_no_entry++;
    return r;
  }
  if (entry->version != current) {
    r.kind = FastPathResult::Kind::Miss;
    r.miss_reason = FastPathResult::MissReason::VersionMismatch;
    counters_.miss_version++;
    return r;
  }
  cache_.touch(key, now_ns);
  assert(entry->version == current);  // version safety
  r.kind = FastPathResult::Kind::Hit;
  r.nexthop_index = entry->nexthop_index;
  m.nexthop_index = entry->nexthop_index;
  m.path_flags |= path_flags::kCacheHit;
  counters_.fast_hits++;
  return r;
}

SlowPathOutcome DpuDatapath::slow_path(const PacketDescriptor &p,
                                       InternalMetadata &m) {
  SlowPathOutcome out;
  m.path_flags |= path_flags::kSlowPath;

  FlowKey key = flow_key_of(p);
  if (!acl_permits(*acl_, key)) {
    out.ok = false;
    out.drop_reason = DropReason::AclDeny;
    counters_.acl_denied++;
    return out;
  }

  // route_table_id from the pre-DPU metadata indexes the VM-NC view.
  auto host = vm_nc_->lookup(m.route_table_id, p.inner.dst_ip);
  if (!host) {
    out.ok = false;
    out.drop_reason = DropReason::VmNcMiss;
    return out;
  }

  auto nexthop = routes_->lookup(*host);
  if (!nexthop) {
    out.ok = false;
    out.drop_reason = DropReason::DpuRouteMiss;
    return out;
  }

  out.ok = true;
  out.decision.nexthop_index = *nexthop;
  out.decision.host_address = *host;
  out.decision.svc_id = m.svc_id;
  m.nexthop_index = *nexthop;
  counters_.slow_completed++;
  return out;
}

CacheInstallOutcome DpuDatapath::offload_install(
    const FlowKey &key, const SlowPathDecision &decision, uint64_t now_ns) {
  FlowEntry entry;
  entry.key = key;
  entry.nexthop_index = decision.nexthop_index;
  entry.svc_id = decision.svc_id;
  entry.version = services_->version_of(decision.svc_id);
  entry.last_hit_ns = now_ns;
  entry.hit_count = 0;
  auto out = cache_.insert(std::move(entry));
  if (out.kind != CacheInstallOutcome::Kind::Rejected) counters_.installs++;
  if (out.kind == CacheInstallOutcome::Kind::EvictedInstalled)
    counters_.evictions++;
  return out;
}

}  // namespace gwsim
