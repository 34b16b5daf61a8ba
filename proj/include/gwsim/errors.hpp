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

#ifndef GWSIM_ERRORS_HPP_
#define GWSIM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gwsim {

// Configuration and wire-format problems are exceptions; datapath misses
// (tenant miss, route miss, ACL deny, ...) are values counted as drops.

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

class MetadataError : public std::runtime_error {
 public:
  enum class Code { LengthMismatch, InvalidFlags, FieldRange };

  MetadataError(Code code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

class PlacementError : public std::runtime_error {
 public:
  PlacementError(std::string table, const std::string &what)
      : std::runtime_error(what), table_(std::move(table)) {}

  // First table that could not be placed.
  const std::string &table() const { return table_; }

 private:
  std::string table_;
};

class UnknownTraceId : public std::runtime_error {
 public:
  explicit UnknownTraceId(unsigned long long id)
      : std::runtime_error("unknown trace id " + std::to_string(id)) {}
};

// Internal consistency violations (e.g. a packet referencing an unregistered
// service). A valid scenario can never trigger these.
class SimInconsistency : public std::logic_error {
 public:
  explicit SimInconsistency(const std::string &what)
      : std::logic_error(what) {}
};

}  // namespace gwsim

#endif  // GWSIM_ERRORS_HPP_
