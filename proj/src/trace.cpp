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

#include "gwsim/trace.hpp"

#include "gwsim/errors.hpp"

namespace gwsim {

nlohmann::ordered_json trace_record_to_json(const TraceRecord &rec) {
  nlohmann::ordered_json j;
  j["trace_id"] = rec.trace_id;
  nlohmann::ordered_json hops = nlohmann::ordered_json::array();
  for (const auto &h : rec.hops) {
    hops.push_back({{"c", h.component},
                    {"s", h.stage},
                    {"a", h.action},
                    {"t", h.t_ns}});
  }
  j["hops"] = std::move(hops);
  j["disposition"] = disposition_name(rec.disposition);
  if (rec.drop_reason) j["drop_reason"] = drop_reason_name(*rec.drop_reason);
  return j;
}

const TraceRecord &MemoryTraceStore::query(uint64_t trace_id) const {
  auto it = index_.find(trace_id);
  if (it == index_.end()) throw UnknownTraceId(trace_id);
  return records_[it->second];
}

JsonlTraceWriter::JsonlTraceWriter(const std::string &path)
    : out_(path, std::ios::binary) {
  if (!out_) throw IoError("cannot open trace file " + path);
}

void JsonlTraceWriter::record(TraceRecord &&rec) {
  out_ << trace_record_to_json(rec).dump() << "\n";
  if (!out_) throw IoError("trace write failed");
}

}  // namespace gwsim
