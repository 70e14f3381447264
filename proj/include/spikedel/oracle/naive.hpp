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
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "spikedel/common.hpp"
#include "spikedel/connectivity/dump.hpp"
#include "spikedel/core/neuron.hpp"
#include "spikedel/exchange/exchange.hpp"
#include "spikedel/oracle/buffer_image.hpp"

namespace spikedel::oracle {

/// Geometry needed to place dump weights into ring-buffer images.
struct DeliveryMeta {
  std::size_t neurons = 0;
  Step interval_steps = 0;
  std::size_t ring_length = 0;
  // Input landing before this step has already been consumed by updates.
  Step read_until = 0;
};

/// Rebuilds ring-buffer content from a spike trace and a connectivity dump
/// only: for every traced entry, walk all dump rows of its source on the
/// addressed (shard, thread, type) and add each weight at its arrival slot.
inline BufferImage naive_deliver(std::span<const TraceRow> trace,
                                 std::span<const DumpRow> dump,
                                 const DeliveryMeta& meta) {
  using Key = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, NeuronId>;
  std::map<Key, std::vector<const DumpRow*>> groups;
  for (const DumpRow& r : dump) {
    if (r.target >= meta.neurons) {
      throw ProvenanceError("dump target " + std::to_string(r.target) +
                            " outside the neuron range");
    }
    groups[{r.shard, r.thread, r.type, r.source}].push_back(&r);
  }

  BufferImage img(meta.neurons, meta.ring_length);
  for (const TraceRow& e : trace) {
    const auto it = groups.find({e.shard, e.thread, e.type, e.source});
    if (it == groups.end()) {
      throw ProvenanceError("trace entry for source " +
                            std::to_string(e.source) +
                            " has no synapses in the dump");
    }
    std::uint32_t first = it->second.front()->lcid;
    for (const DumpRow* r : it->second) first = std::min(first, r->lcid);
    if (first != e.lcid) {
      throw ProvenanceError("trace entry lcid " + std::to_string(e.lcid) +
                            " does not start the dumped segment of source " +
                            std::to_string(e.source));
    }
    const Step start = e.interval * meta.interval_steps;
    for (const DumpRow* r : it->second) {
      const Step arrival = start + e.lag + r->delay;
      if (arrival < meta.read_until) continue;
      img.at(r->target, static_cast<std::size_t>(arrival) % meta.ring_length) +=
          r->weight;
    }
  }
  return img;
}

struct NaiveRunConfig {
  std::size_t neurons = 0;
  double resolution_ms = 0.1;
  Step interval_steps = 15;
  std::size_t ring_length = 30;
  std::int64_t intervals = 0;
  std::uint64_t seed = 0;
};

struct NaiveRun {
  std::uint64_t spikes = 0;
  std::uint64_t spike_hash = 0;
  std::vector<std::pair<Step, NeuronId>> spike_train;  // (step, gid), sorted
  BufferImage image;
};

/// Single-threaded full simulation with immediate spike propagation: every
/// spike is pushed straight into per-neuron future input keyed by arrival
/// step. No intervals, no exchange, no delivery kernels.
inline NaiveRun naive_simulate(std::span<const DumpRow> dump,
                               const NeuronParams& params,
                               const NaiveRunConfig& cfg) {
  const PropagatorMatrix prop = propagator_init(params, cfg.resolution_ms);
  std::vector<std::vector<const DumpRow*>> out(cfg.neurons);
  for (const DumpRow& r : dump) {
    if (r.source >= cfg.neurons || r.target >= cfg.neurons) {
      throw ProvenanceError("dump row references an unknown neuron");
    }
    out[r.source].push_back(&r);
  }

  std::vector<NeuronState> state(cfg.neurons);
  for (std::size_t g = 0; g < cfg.neurons; ++g) {
    state[g] = initial_neuron_state(params, cfg.seed, static_cast<NeuronId>(g));
  }
  // key = arrival_step * neurons + target
  std::unordered_map<std::uint64_t, double> future;
  const auto key = [&](Step s, std::size_t g) {
    return static_cast<std::uint64_t>(s) * cfg.neurons + g;
  };

  NaiveRun run;
  const Step steps = cfg.intervals * cfg.interval_steps;
  for (Step s = 0; s < steps; ++s) {
    for (std::size_t g = 0; g < cfg.neurons; ++g) {
      double input = 0.0;
      if (const auto it = future.find(key(s, g)); it != future.end()) {
        input = it->second;
        future.erase(it);
      }
      if (!neuron_update(state[g], params, prop, input)) continue;
      const auto gid = static_cast<NeuronId>(g);
      ++run.spikes;
      run.spike_hash += mix64((static_cast<std::uint64_t>(s) << 32) ^ gid);
      run.spike_train.emplace_back(s, gid);
      for (const DumpRow* r : out[g]) {
        future[key(s + r->delay, r->target)] += r->weight;
      }
    }
  }

  run.image = BufferImage(cfg.neurons, cfg.ring_length);
  for (const auto& [k, w] : future) {
    const Step s = static_cast<Step>(k / cfg.neurons);
    const std::size_t g = k % cfg.neurons;
    if (s < steps) throw StructuralError("unconsumed past input in oracle");
    run.image.at(static_cast<NeuronId>(g),
                 static_cast<std::size_t>(s) % cfg.ring_length) += w;
  }
  return run;
}

}  // namespace spikedel::oracle
