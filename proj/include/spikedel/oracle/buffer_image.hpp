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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spikedel/common.hpp"

namespace spikedel::oracle {

/// Snapshot of every neuron's ring buffer, indexed by global neuron id.
struct BufferImage {
  std::size_t neurons = 0;
  std::size_t length = 0;
  std::vector<double> slots;  // neuron-major, `length` slots per neuron

  BufferImage() = default;
  BufferImage(std::size_t n, std::size_t l)
      : neurons(n), length(l), slots(n * l, 0.0) {}

  double& at(NeuronId gid, std::size_t slot) {
    return slots[gid * length + slot];
  }
  double at(NeuronId gid, std::size_t slot) const {
    return slots[gid * length + slot];
  }
  std::span<double> row(NeuronId gid) {
    return {slots.data() + gid * length, length};
  }

  std::size_t nonzero_slots() const noexcept {
    std::size_t n = 0;
    for (double v : slots) n += v != 0.0;
    return n;
  }
};

struct Mismatch {
  NeuronId neuron;
  std::size_t slot;
  double expected;
  double actual;
};

struct EquivalenceReport {
  std::size_t mismatches = 0;
  std::vector<Mismatch> first;  // at most 10, in (neuron, slot) order

  bool pass() const noexcept { return mismatches == 0; }

  std::string describe() const {
    if (pass()) return "images identical";
    std::string s = std::to_string(mismatches) + " mismatching slots;";
    for (const auto& m : first) {
      s += " (neuron " + std::to_string(m.neuron) + ", slot " +
           std::to_string(m.slot) + ": " + std::to_string(m.expected) +
           " vs " + std::to_string(m.actual) + ")";
    }
    return s;
  }
};

/// Bit-level slot-by-slot comparison of binary64 payloads.
inline EquivalenceReport assert_equivalence(const BufferImage& expected,
                                            const BufferImage& actual) {
  if (expected.neurons != actual.neurons || expected.length != actual.length ||
      expected.slots.size() != actual.slots.size()) {
    throw StructuralError("buffer images differ in shape");
  }
  EquivalenceReport report;
  for (std::size_t k = 0; k < expected.slots.size(); ++k) {
    const double e = expected.slots[k];
    const double a = actual.slots[k];
    if (std::bit_cast<std::uint64_t>(e) != std::bit_cast<std::uint64_t>(a)) {
      if (report.first.size() < 10) {
        report.first.push_back({static_cast<NeuronId>(k / expected.length),
                                k % expected.length, e, a});
      }
      ++report.mismatches;
    }
  }
  return report;
}

}  // namespace spikedel::oracle
