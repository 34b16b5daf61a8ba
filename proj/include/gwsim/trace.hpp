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

#ifndef GWSIM_TRACE_HPP_
#define GWSIM_TRACE_HPP_

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gwsim/disposition.hpp"
#include "json.hpp"

namespace gwsim {

// One hop of a packet's journey. `stage` is component-specific: the ASIC
// reports the pipe index, the DPU reports the number of MA stages transited.
struct TraceHop {
  std::string component;
  uint32_t stage = 0;
  std::string action;
  uint64_t t_ns = 0;
};

struct TraceRecord {
  uint64_t trace_id = 0;
  std::vector<TraceHop> hops;
  Disposition disposition = Disposition::Drop;
  std::optional<DropReason> drop_reason;
};

nlohmann::ordered_json trace_record_to_json(const TraceRecord &rec);

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(TraceRecord &&rec) = 0;
};

// In-memory store with id lookup; meant for diagnostic-sized runs.
class MemoryTraceStore : public TraceSink {
 public:
  void record(TraceRecord &&rec) override {
    index_[rec.trace_id] = records_.size();
    records_.push_back(std::move(rec));
  }

  // Throws UnknownTraceId.
  const TraceRecord &query(uint64_t trace_id) const;

  size_t size() const { return records_.size(); }
  const std::vector<TraceRecord> &records() const { return records_; }

 private:
  std::vector<TraceRecord> records_;
  std::unordered_map<uint64_t, size_t> index_;
};

// Streams records as JSON lines; nothing is retained.
class JsonlTraceWriter : public TraceSink {
 public:
  explicit JsonlTraceWriter(const std::string &path);

  void record(TraceRecord &&rec) override;
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

// Fan-out to several sinks (file + memory, typically).
class TeeTraceSink : public TraceSink {
 public:
  TeeTraceSink(TraceSink *a, TraceSink *b) : a_(a), b_(b) {}

  void record(TraceRecord &&rec) override {
    if (a_) {
      TraceRecord copy = rec;
      a_->record(std::move(copy));
    }
    if (b_) b_->record(std::move(rec));
  }

 private:
  TraceSink *a_;
  TraceSink *b_;
};

}  // namespace gwsim

#endif  // GWSIM_TRACE_HPP_
