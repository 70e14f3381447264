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
#include <map>

#include "spikedel/connectivity/network.hpp"

namespace spikedel {

/// Histogram of target-segment lengths.
struct SegmentCensus {
  std::map<std::uint32_t, std::uint64_t> histogram;  // length -> segments
  std::uint64_t segments = 0;
  std::uint64_t synapses = 0;

  double mean_length() const noexcept {
    return segments == 0 ? 0.0
                         : static_cast<double>(synapses) /
                               static_cast<double>(segments);
  }

  void add(const SynapseArray& arr) {
    for (std::size_t lcid = 0; lcid < arr.size();) {
      const std::uint32_t len = arr.synapses[lcid].segment_size;
      ++histogram[len];
      ++segments;
      synapses += len;
      lcid += len;
    }
  }

  void merge(const SegmentCensus& other) {
    for (const auto& [len, count] : other.histogram) histogram[len] += count;
    segments += other.segments;
    synapses += other.synapses;
  }
};

inline SegmentCensus segment_length_census(const SynapseStore& store) {
  SegmentCensus c;
  for (const auto& per_thread : store.inner) {
    for (const auto& arr : per_thread) c.add(arr);
  }
  return c;
}

inline SegmentCensus segment_length_census(const Network& net) {
  SegmentCensus c;
  for (const auto& store : net.stores) c.merge(segment_length_census(store));
  return c;
}

namespace detail {

// Neurons g in [lo, hi) with g mod m == r.
inline std::uint64_t count_congruent(std::uint64_t lo, std::uint64_t hi,
                                     std::uint64_t m, std::uint64_t r) {
  auto below = [&](std::uint64_t x) { return x / m + (x % m > r ? 1 : 0); };
  return hi <= lo ? 0 : below(hi) - below(lo);
}

}  // namespace detail

/// Expected mean segment length under the sampling model used by
/// build_network: per target, `indegree` sources drawn uniformly with
/// replacement from the source population minus the target itself. Returned
/// as expected synapse count over expected number of distinct
/// (array, source) pairs.
inline double expected_mean_segment_length(const NetworkConfig& cfg) {
  const Placement p(cfg);
  const std::uint64_t n = cfg.total_neurons();
  const std::uint64_t ne = cfg.excitatory_count();
  struct Population {
    std::uint64_t lo, hi;
    std::uint32_t indegree;
  };
  const Population pops[2] = {{0, ne, cfg.indegree_exc},
                              {ne, n, cfg.indegree_inh}};

  double synapses = 0.0;
  double distinct = 0.0;
  for (std::uint32_t vp = 0; vp < p.vps(); ++vp) {
    const double n_vp = p.neurons_on_vp(vp, n);
    for (const auto& pop : pops) {
      if (pop.indegree == 0) continue;
      const double size = static_cast<double>(pop.hi - pop.lo);
      const double in_pop = static_cast<double>(
          detail::count_congruent(pop.lo, pop.hi, p.vps(), vp));
      const double out_pop = n_vp - in_pop;
      const double k = pop.indegree;
      // log P(a given target never draws a given source)
      const double log_miss_in = k * std::log1p(-1.0 / (size - 1.0));
      const double log_miss_out = k * std::log1p(-1.0 / size);
      // Sources hosted elsewhere are candidates for every in-population
      // target; sources hosted here are excluded by their own autapse rule.
      const double p_far = 1.0 - std::exp(in_pop * log_miss_in +
                                          out_pop * log_miss_out);
      const double p_near =
          1.0 - std::exp((in_pop - 1.0) * log_miss_in + out_pop * log_miss_out);
      distinct += (size - in_pop) * p_far + in_pop * p_near;
      synapses += n_vp * k;
    }
  }
  // Populations are disjoint, so distinct-source counts add across them
  // whether or not they share an array.
  return distinct == 0.0 ? 0.0 : synapses / distinct;
}

}  // namespace spikedel
