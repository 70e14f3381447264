/*
 * Copyright 2026 The spikedel Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

// Values frozen from reference runs of this code base. Both test binaries
// recompute them under different compiler settings.

#include <cstdint>
#include <string_view>

#include "spikedel/spikedel.hpp"

namespace golden {

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// The fixed instance behind the frozen hashes.
inline spikedel::SimConfig reference_instance() {
  spikedel::SimConfig cfg;
  cfg.network.shards = 2;
  cfg.network.threads_per_shard = 2;
  cfg.network.neurons_per_shard = 300;
  cfg.network.indegree_exc = 40;
  cfg.network.indegree_inh = 10;
  cfg.network.seed = 2026;
  cfg.network.weight_mode = spikedel::WeightMode::exact;
  cfg.biological_time_s = 0.03;
  cfg.repetitions = 1;
  return cfg;
}

inline constexpr std::uint64_t reference_dump_fnv = 0x23a40e73bd012debULL;
inline constexpr std::uint64_t reference_spike_hash = 0xc5260486952652b7ULL;
inline constexpr std::uint64_t reference_spike_count = 830;

// Default network (1000 neurons per shard, 4 x 2 virtual processes) under
// REF for 0.3 s, production weights. The reference run gave 43.3617 Hz; the
// band is that value +-5 %.
inline constexpr double rate_band_reference_hz = 43.361666666666665;
inline constexpr double rate_band_bio_time_s = 0.3;
inline constexpr double rate_band_low_hz = 0.95 * rate_band_reference_hz;
inline constexpr double rate_band_high_hz = 1.05 * rate_band_reference_hz;

}  // namespace golden
