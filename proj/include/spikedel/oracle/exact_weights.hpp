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

#include <cmath>
#include <cstdint>
#include <random>

#include "spikedel/common.hpp"

namespace spikedel::oracle {

/// Weights that are integer multiples of 2^-10 pA with magnitude at most
/// 16 pA. Any sum of up to 2^20 of them stays below 2^24 pA, i.e. within
/// 2^34 quanta, far inside the 53-bit binary64 mantissa, so summation is
/// exact and therefore independent of addition order.
struct ExactWeightScheme {
  static constexpr double quantum = 0x1.0p-10;
  static constexpr double max_magnitude = 16.0;
  static constexpr std::uint64_t max_accumulations_per_slot = 1ULL << 20;
  static constexpr std::int64_t max_quanta =
      static_cast<std::int64_t>(max_magnitude / quantum);

  static bool is_exact(double w) noexcept {
    const double q = w / quantum;
    return std::isfinite(q) && q == std::trunc(q) &&
           std::abs(w) <= max_magnitude;
  }
};

/// Deterministic stream of nonzero signed multiples of the quantum.
class ExactWeightSampler {
 public:
  explicit ExactWeightSampler(std::uint64_t seed) : rng_(mix64(seed)) {}

  /// Signed draw.
  double operator()() {
    const double magnitude = next_magnitude();
    return (rng_() & 1U) ? -magnitude : magnitude;
  }

  /// Positive draw in (0, max_magnitude].
  double next_magnitude() {
    const auto k = 1 + static_cast<std::int64_t>(uniform_below(
                           rng_, ExactWeightScheme::max_quanta));
    return static_cast<double>(k) * ExactWeightScheme::quantum;
  }

 private:
  std::mt19937_64 rng_;
};

inline ExactWeightSampler exact_weight_sampler(std::uint64_t seed) {
  return ExactWeightSampler(seed);
}

}  // namespace spikedel::oracle
