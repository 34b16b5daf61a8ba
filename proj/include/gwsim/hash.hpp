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

#ifndef GWSIM_HASH_HPP_
#define GWSIM_HASH_HPP_

#include <cstddef>
#include <cstdint>

namespace gwsim {

// The one hash used for ECMP member selection, DPU fan-out, flow-cache
// indexing and software RSS: FNV-1a over the canonical big-endian field
// encoding, followed by a final avalanche. The seed is folded into the FNV
// offset basis; every selection site passes the run-level seed (default 0)
// so results are reproducible across runs and implementations.
inline uint32_t mix_hash(const uint8_t *data, size_t n, uint32_t seed = 0) {
  const uint32_t prime = 16777619u;
  uint32_t h = 2166136261u ^ seed;
  for (size_t i = 0; i < n; i++) h = (h ^ data[i]) * prime;
  h += h << 13;
  h ^= h >> 7;
  h += h << 3;
  h ^= h >> 17;
  h += h << 5;
  return h;
}

}  // namespace gwsim

#endif  // GWSIM_HASH_HPP_
