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

#include <random>

#include "doctest.h"
#include "gwsim/lpm.hpp"
#include "oracles.hpp"

using namespace gwsim;

TEST_CASE("longest prefix wins") {
  LpmTable<int> table;
  REQUIRE(table.insert(Ipv4Prefix::parse("10.0.0.0/8"), 1));
  REQUIRE(table.insert(Ipv4Prefix::parse("10.1.0.0/16"), 2));

  const int *r = table.lookup(parse_ipv4("10.1.2.3"));
  REQUIRE(r != nullptr);
  CHECK(*r == 2);

  r = table.lookup(parse_ipv4("10.2.0.1"));
  REQUIRE(r != nullptr);
  CHECK(*r == 1);

  CHECK(table.lookup(parse_ipv4("11.0.0.1")) == nullptr);
}

TEST_CASE("default route matches everything") {
  LpmTable<int> table;
  table.insert(Ipv4Prefix::parse("0.0.0.0/0"), 9);
  CHECK(*table.lookup(0) == 9);
  CHECK(*table.lookup(0xffffffff) == 9);
}

TEST_CASE("duplicate prefix refused unless overwriting") {
  LpmTable<int> table;
  CHECK(table.insert(Ipv4Prefix::parse("10.0.0.0/8"), 1));
  CHECK_FALSE(table.insert(Ipv4Prefix::parse("10.0.0.0/8"), 2));
  CHECK(*table.lookup(parse_ipv4("10.0.0.1")) == 1);
  CHECK(table.insert(Ipv4Prefix::parse("10.0.0.0/8"), 2, /*overwrite=*/true));
  CHECK(*table.lookup(parse_ipv4("10.0.0.1")) == 2);
  CHECK(table.size() == 1);
  CHECK(table.contains(Ipv4Prefix::parse("10.0.0.0/8")));
  CHECK_FALSE(table.contains(Ipv4Prefix::parse("10.0.0.0/9")));
}

TEST_CASE("randomized tables agree with the brute-force oracle") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 5; round++) {
    LpmTable<uint32_t> table;
    std::vector<std::pair<Ipv4Prefix, uint32_t>> entries;
    for (int i = 0; i < 300; i++) {
      Ipv4Prefix p;
      p.len = static_cast<uint8_t>(rng() % 33);
      p.addr = static_cast<uint32_t>(rng()) & p.mask();
      uint32_t value = static_cast<uint32_t>(rng());
      if (table.insert(p, value)) entries.emplace_back(p, value);
    }
    for (int i = 0; i < 10'000; i++) {
      uint32_t ip = static_cast<uint32_t>(rng());
      const uint32_t *got = table.lookup(ip);
      auto want = testing::lpm_oracle(entries, ip);
      if (want.has_value()) {
        REQUIRE(got != nullptr);
        CHECK(*got == *want);
      } else {
        CHECK(got == nullptr);
      }
    }
  }
}
