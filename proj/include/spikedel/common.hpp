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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace spikedel {

using NeuronId = std::uint32_t;
using Step = std::int64_t;

// Error taxonomy. Each maps to one failure class callers may want to
// distinguish; all derive from std::runtime_error.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParameterDomainError : ConfigError {
  using ConfigError::ConfigError;
};
struct RoutingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StoreCorruption : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RegisterCorruption : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProvenanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// splitmix64 finalizer; used for deriving independent stream seeds and for
// the order-independent spike-train hash.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream salts keep construction, initial-state and weight draws independent.
enum class Stream : std::uint64_t {
  connectivity = 0x636f6e6e,
  initial_state = 0x696e6974,
  weights = 0x77676874,
};

inline std::mt19937_64 make_stream(std::uint64_t seed, Stream stream,
                                   std::uint64_t index) {
  return std::mt19937_64(
      mix64(mix64(seed ^ static_cast<std::uint64_t>(stream)) + index));
}

// Bounded draws written by hand: the std distributions are
// implementation-defined, which would break cross-platform determinism.
template <class Engine>
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

template <class Engine>
double uniform_unit(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Converts a duration to an integral step count, rejecting non-multiples.
inline Step to_steps(double duration_ms, double resolution_ms,
                     const char* what) {
  if (!(resolution_ms > 0.0)) {
    throw ConfigError("resolution must be positive");
  }
  const double ratio = duration_ms / resolution_ms;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
    throw ConfigError(std::string(what) + " is not a multiple of the resolution");
  }
  return static_cast<Step>(rounded);
}

}  // namespace spikedel
