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
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "spikedel/common.hpp"
#include "spikedel/connectivity/synapse.hpp"
#include "spikedel/core/ring_buffer.hpp"
#include "spikedel/oracle/exact_weights.hpp"

namespace spikedel {

enum class WeightMode { production, exact };

/// Balanced random network: an excitatory and an inhibitory population with
/// fixed in-degrees, one homogeneous delay, and round-robin placement over
/// shards x threads virtual processes.
struct NetworkConfig {
  std::uint32_t shards = 2;
  std::uint32_t threads_per_shard = 2;
  std::uint32_t neurons_per_shard = 1000;
  double excitatory_fraction = 0.8;
  std::uint32_t indegree_exc = 80;
  std::uint32_t indegree_inh = 20;
  double weight_exc = 87.8;  // pA
  double g = 5.0;            // inhibitory weight is -g * weight_exc
  double delay_ms = 1.5;
  double resolution_ms = 0.1;
  std::uint32_t synapse_types = 1;
  std::uint64_t seed = 12345;
  WeightMode weight_mode = WeightMode::production;

  std::uint32_t virtual_processes() const noexcept {
    return shards * threads_per_shard;
  }
  std::uint64_t total_neurons() const noexcept {
    return static_cast<std::uint64_t>(shards) * neurons_per_shard;
  }
  std::uint64_t excitatory_count() const noexcept {
    return static_cast<std::uint64_t>(
        std::llround(excitatory_fraction * static_cast<double>(total_neurons())));
  }
  std::uint64_t inhibitory_count() const noexcept {
    return total_neurons() - excitatory_count();
  }
  Step delay_steps() const { return to_steps(delay_ms, resolution_ms, "delay"); }
  /// Spikes are exchanged once per minimum delay; with one homogeneous delay
  /// that is the delay itself.
  Step interval_steps() const { return delay_steps(); }
  std::size_t ring_buffer_length() const {
    return ring_length(delay_steps(), interval_steps());
  }

  void validate() const {
    if (shards == 0 || threads_per_shard == 0) {
      throw ConfigError("shards and threads_per_shard must be >= 1");
    }
    if (threads_per_shard > 65535) throw ConfigError("too many threads");
    if (synapse_types == 0 || synapse_types > 255) {
      throw ConfigError("synapse_types must be in [1, 255]");
    }
    if (total_neurons() == 0 || total_neurons() > UINT32_MAX) {
      throw ConfigError("neuron count out of range");
    }
    if (!(excitatory_fraction >= 0.0 && excitatory_fraction <= 1.0)) {
      throw ConfigError("excitatory_fraction must be in [0, 1]");
    }
    check_population(indegree_exc, excitatory_count(), "excitatory");
    check_population(indegree_inh, inhibitory_count(), "inhibitory");
    const Step d = delay_steps();
    if (d < 1) throw ConfigError("delay must be a positive multiple of h");
    if (d > max_delay_steps) {
      throw ConfigError("delay exceeds the 8-bit delay field (255 steps)");
    }
  }

 private:
  static void check_population(std::uint32_t indegree, std::uint64_t size,
                               const char* name) {
    if (indegree == 0) return;
    // Sampling with replacement but without autapses needs one other member.
    if (indegree > size || size < 2) {
      throw ConfigError(std::string(name) +
                        " in-degree exceeds population size");
    }
  }
};

struct Placement {
  std::uint32_t shards;
  std::uint32_t threads;

  explicit Placement(const NetworkConfig& cfg)
      : shards(cfg.shards), threads(cfg.threads_per_shard) {}
  Placement(std::uint32_t m, std::uint32_t t) : shards(m), threads(t) {}

  std::uint32_t vps() const noexcept { return shards * threads; }
  std::uint32_t vp_of(NeuronId g) const noexcept { return g % vps(); }
  std::uint32_t shard_of_vp(std::uint32_t vp) const noexcept {
    return vp % shards;
  }
  std::uint32_t thread_of_vp(std::uint32_t vp) const noexcept {
    return vp / shards;
  }
  std::uint32_t vp(std::uint32_t shard, std::uint32_t thread) const noexcept {
    return thread * shards + shard;
  }
  std::uint32_t shard_of(NeuronId g) const noexcept {
    return shard_of_vp(vp_of(g));
  }
  std::uint32_t thread_of(NeuronId g) const noexcept {
    return thread_of_vp(vp_of(g));
  }
  std::uint32_t local_index(NeuronId g) const noexcept { return g / vps(); }
  NeuronId global_id(std::uint32_t vp, std::uint32_t local) const noexcept {
    return local * vps() + vp;
  }
  std::uint32_t neurons_on_vp(std::uint32_t vp,
                              std::uint64_t total) const noexcept {
    if (vp >= total) return 0;
    return static_cast<std::uint32_t>((total - vp + vps() - 1) / vps());
  }
};

/// Presynaptic-side record: where one source's target segment starts.
struct RoutingEntry {
  std::uint32_t shard;
  std::uint16_t thread;
  std::uint8_t type;
  std::uint32_t lcid;

  friend bool operator==(const RoutingEntry&, const RoutingEntry&) = default;
};

/// Per-source routing records in compressed-row form.
class RoutingTable {
 public:
  RoutingTable() = default;

  std::size_t sources() const noexcept {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }
  std::size_t size() const noexcept { return entries_.size(); }

  std::span<const RoutingEntry> targets_of(NeuronId source) const {
    if (source >= sources()) {
      throw RoutingError("unknown source neuron " + std::to_string(source));
    }
    return {entries_.data() + offsets_[source],
            offsets_[source + 1] - offsets_[source]};
  }

  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::vector<RoutingEntry>& entries() const noexcept {
    return entries_;
  }

  /// Builds from (source, entry) pairs; entry order per source follows the
  /// input order.
  static RoutingTable from_pairs(
      std::size_t source_count,
      const std::vector<std::pair<NeuronId, RoutingEntry>>& pairs) {
    RoutingTable table;
    table.offsets_.assign(source_count + 1, 0);
    for (const auto& [src, entry] : pairs) ++table.offsets_[src + 1];
    for (std::size_t i = 0; i < source_count; ++i) {
      table.offsets_[i + 1] += table.offsets_[i];
    }
    table.entries_.resize(pairs.size());
    std::vector<std::size_t> cursor(table.offsets_.begin(),
                                    table.offsets_.end() - 1);
    for (const auto& [src, entry] : pairs) {
      table.entries_[cursor[src]++] = entry;
    }
    return table;
  }

  friend bool operator==(const RoutingTable&, const RoutingTable&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<RoutingEntry> entries_;
};

struct Network {
  NetworkConfig config;
  std::vector<SynapseStore> stores;  // one per shard
  RoutingTable routing;

  Placement placement() const { return Placement(config); }

  /// Neurons of one (shard, thread) pool, in local-index order.
  std::vector<NeuronId> pool(std::uint32_t shard, std::uint32_t thread) const {
    const Placement p = placement();
    const std::uint32_t vp = p.vp(shard, thread);
    const std::uint32_t n = p.neurons_on_vp(vp, config.total_neurons());
    std::vector<NeuronId> ids(n);
    for (std::uint32_t j = 0; j < n; ++j) ids[j] = p.global_id(vp, j);
    return ids;
  }

  std::size_t synapse_count() const noexcept {
    std::size_t total = 0;
    for (const auto& s : stores) total += s.synapse_count();
    return total;
  }
};

namespace detail {

struct PendingSynapse {
  NeuronId source;
  std::uint32_t target;
  double weight;
};

// Draws one neuron's incoming synapses and appends them per synapse type.
inline void draw_incoming(const NetworkConfig& cfg, NeuronId target_gid,
                          std::uint32_t target_local,
                          std::vector<std::vector<PendingSynapse>>& by_type) {
  const std::uint64_t ne = cfg.excitatory_count();
  const std::uint64_t n = cfg.total_neurons();
  auto rng = make_stream(cfg.seed, Stream::connectivity, target_gid);
  oracle::ExactWeightSampler exact(
      mix64(cfg.seed ^ static_cast<std::uint64_t>(Stream::weights)) +
      target_gid);

  auto draw_population = [&](std::uint64_t lo, std::uint64_t hi,
                             std::uint32_t indegree, bool inhibitory) {
    const bool self_in = target_gid >= lo && target_gid < hi;
    const std::uint64_t span = (hi - lo) - (self_in ? 1 : 0);
    const std::uint32_t type =
        static_cast<std::uint32_t>(inhibitory ? 1 : 0) % cfg.synapse_types;
    for (std::uint32_t k = 0; k < indegree; ++k) {
      std::uint64_t src = lo + uniform_below(rng, span);
      if (self_in && src >= target_gid) ++src;
      double w;
      if (cfg.weight_mode == WeightMode::exact) {
        const double mag = exact.next_magnitude();
        w = inhibitory ? -mag : mag;
      } else {
        w = inhibitory ? -cfg.g * cfg.weight_exc : cfg.weight_exc;
      }
      by_type[type].push_back(
          {static_cast<NeuronId>(src), target_local, w});
    }
  };
  draw_population(0, ne, cfg.indegree_exc, false);
  draw_population(ne, n, cfg.indegree_inh, true);
}

inline SynapseStore build_shard(const NetworkConfig& cfg, std::uint32_t shard) {
  const Placement p(cfg);
  const auto delay = static_cast<std::uint8_t>(cfg.delay_steps());
  SynapseStore store(cfg.threads_per_shard, cfg.synapse_types);
  std::vector<std::vector<PendingSynapse>> by_type(cfg.synapse_types);
  for (std::uint32_t t = 0; t < cfg.threads_per_shard; ++t) {
    const std::uint32_t vp = p.vp(shard, t);
    const std::uint32_t n_local = p.neurons_on_vp(vp, cfg.total_neurons());
    for (auto& v : by_type) {
      v.clear();
      v.reserve(static_cast<std::size_t>(n_local) *
                (cfg.indegree_exc + cfg.indegree_inh) / cfg.synapse_types);
    }
    for (std::uint32_t j = 0; j < n_local; ++j) {
      draw_incoming(cfg, p.global_id(vp, j), j, by_type);
    }
    for (std::uint32_t type = 0; type < cfg.synapse_types; ++type) {
      auto& pending = by_type[type];
      std::stable_sort(pending.begin(), pending.end(),
                       [](const PendingSynapse& a, const PendingSynapse& b) {
                         return a.source < b.source;
                       });
      SynapseArray& arr = store.at(t, type);
      arr.synapses.resize(pending.size());
      arr.sources.resize(pending.size());
      for (std::size_t k = 0; k < pending.size(); ++k) {
        arr.synapses[k].weight = pending[k].weight;
        arr.synapses[k].target = pending[k].target;
        arr.synapses[k].delay = delay;
        arr.sources[k] = pending[k].source;
      }
      arr.finalize_segments();
      pending.clear();
      pending.shrink_to_fit();
    }
  }
  return store;
}

}  // namespace detail

/// Builds all shard-local synapse stores and the routing table. Shards are
/// independent and may be built by `workers` threads; the result does not
/// depend on the worker count.
inline Network build_network(const NetworkConfig& cfg, unsigned workers = 1) {
  cfg.validate();
  Network net;
  net.config = cfg;
  net.stores.resize(cfg.shards);

  workers = std::max(1U, std::min<unsigned>(workers, cfg.shards));
  if (workers == 1) {
    for (std::uint32_t s = 0; s < cfg.shards; ++s) {
      net.stores[s] = detail::build_shard(cfg, s);
    }
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint32_t s = w; s < cfg.shards; s += workers) {
            net.stores[s] = detail::build_shard(cfg, s);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<std::pair<NeuronId, RoutingEntry>> pairs;
  for (std::uint32_t s = 0; s < cfg.shards; ++s) {
    const SynapseStore& store = net.stores[s];
    for (std::uint32_t t = 0; t < store.threads(); ++t) {
      for (std::uint32_t type = 0; type < store.types(); ++type) {
        const SynapseArray& arr = store.at(t, type);
        for (std::size_t lcid = 0; lcid < arr.size();
             lcid += arr.synapses[lcid].segment_size) {
          pairs.push_back({arr.sources[lcid],
                           {s, static_cast<std::uint16_t>(t),
                            static_cast<std::uint8_t>(type),
                            static_cast<std::uint32_t>(lcid)}});
        }
      }
    }
  }
  net.routing = RoutingTable::from_pairs(cfg.total_neurons(), pairs);
  return net;
}

}  // namespace spikedel
