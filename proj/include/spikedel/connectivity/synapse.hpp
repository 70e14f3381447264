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

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spikedel/common.hpp"

namespace spikedel {

/// What the SYN step hands to the RB step.
struct SendResult {
  bool subsq;
  std::uint32_t target;
  std::uint8_t delay;
  double weight;
};

/// Static synapse. `target` is the target neuron's index in its thread's
/// RingBufferPool. `segment_size` is only meaningful on the first synapse of
/// a target segment; delay is kept at 8 bits to make room for it.
struct Synapse {
  double weight = 0.0;
  std::uint32_t target = 0;
  std::uint32_t segment_size = 0;
  std::uint8_t delay = 0;
  bool subsq = false;

  SendResult send() const noexcept { return {subsq, target, delay, weight}; }

  friend bool operator==(const Synapse&, const Synapse&) = default;
};

inline constexpr Step max_delay_steps = 255;

/// Innermost array of the synapse store: all synapses of one
/// (thread, synapse type), sorted by source so that each source's synapses
/// form one contiguous target segment.
///
/// `sources` runs parallel to `synapses` and exists for diagnostics and the
/// connectivity dump only; delivery never reads it.
struct SynapseArray {
  std::vector<Synapse> synapses;
  std::vector<NeuronId> sources;

  std::size_t size() const noexcept { return synapses.size(); }
  bool empty() const noexcept { return synapses.empty(); }
  const Synapse& operator[](std::size_t lcid) const noexcept {
    return synapses[lcid];
  }

  bool is_segment_start(std::size_t lcid) const noexcept {
    return lcid < synapses.size() &&
           (lcid == 0 || !synapses[lcid - 1].subsq);
  }

  std::uint32_t get_ts_size(std::size_t lcid) const noexcept {
    assert(is_segment_start(lcid) && "lcid does not address a segment start");
    return synapses[lcid].segment_size;
  }

  /// Sets subsq and segment_size from `sources`. Requires the array to be
  /// sorted by source already.
  void finalize_segments() {
    const std::size_t n = synapses.size();
    std::size_t begin = 0;
    while (begin < n) {
      std::size_t end = begin + 1;
      while (end < n && sources[end] == sources[begin]) ++end;
      for (std::size_t k = begin; k < end; ++k) {
        synapses[k].subsq = k + 1 < end;
        synapses[k].segment_size = 0;
      }
      synapses[begin].segment_size = static_cast<std::uint32_t>(end - begin);
      begin = end;
    }
  }

  /// Checks the subsq chain against segment_size and the source column.
  /// Throws StoreCorruption on the first inconsistency.
  void validate() const {
    const std::size_t n = synapses.size();
    if (sources.size() != n) {
      throw StoreCorruption("source column length mismatch");
    }
    std::size_t lcid = 0;
    while (lcid < n) {
      const std::uint32_t len = synapses[lcid].segment_size;
      if (len == 0 || lcid + len > n) {
        throw StoreCorruption("bad segment size at lcid " +
                              std::to_string(lcid));
      }
      for (std::size_t k = lcid; k < lcid + len; ++k) {
        if (synapses[k].subsq != (k + 1 < lcid + len) ||
            sources[k] != sources[lcid]) {
          throw StoreCorruption("subsq chain broken at lcid " +
                                std::to_string(k));
        }
      }
      if (lcid + len < n && sources[lcid + len] <= sources[lcid]) {
        throw StoreCorruption("sources not sorted at lcid " +
                              std::to_string(lcid + len));
      }
      lcid += len;
    }
  }
};

/// Process-local synapses of one shard, indexed [thread][synapse type].
struct SynapseStore {
  std::vector<std::vector<SynapseArray>> inner;

  SynapseStore() = default;
  SynapseStore(std::size_t threads, std::size_t types)
      : inner(threads, std::vector<SynapseArray>(types)) {}

  std::size_t threads() const noexcept { return inner.size(); }
  std::size_t types() const noexcept {
    return inner.empty() ? 0 : inner.front().size();
  }
  SynapseArray& at(std::size_t thread, std::size_t type) {
    return inner[thread][type];
  }
  const SynapseArray& at(std::size_t thread, std::size_t type) const {
    return inner[thread][type];
  }

  std::size_t synapse_count() const noexcept {
    std::size_t total = 0;
    for (const auto& per_thread : inner) {
      for (const auto& arr : per_thread) total += arr.size();
    }
    return total;
  }
};

inline std::uint32_t get_ts_size(const SynapseArray& array,
                                 std::size_t lcid) noexcept {
  return array.get_ts_size(lcid);
}

}  // namespace spikedel
