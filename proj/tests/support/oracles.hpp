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

// Test-only reference computations. Nothing here calls into the delivery
// kernels, the synapse store or the simulation driver.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "spikedel/spikedel.hpp"

namespace testing_support {

using spikedel::DumpRow;
using spikedel::NeuronParams;
using spikedel::TraceRow;

/// Integrates dV/dt = -(V - E_L)/tau_m + (I + I_e)/C, dI/dt = -I/tau_s with
/// classic RK4 on a grid `refine` times finer than h, and returns the first
/// coarse step k >= 1 with V(k h) >= threshold, if any within max_steps.
inline std::optional<std::int64_t> fine_grid_first_crossing(
    const NeuronParams& p, double h, double v0, double i0,
    std::int64_t max_steps, int refine = 1000) {
  const double dt = h / refine;
  auto dv = [&](double v, double i) {
    return -(v - p.resting_potential) / p.tau_membrane +
           (i + p.external_current) / p.capacitance;
  };
  auto di = [&](double i) { return -i / p.tau_synapse; };
  double v = v0, cur = i0;
  for (std::int64_t k = 1; k <= max_steps; ++k) {
    for (int r = 0; r < refine; ++r) {
      const double k1v = dv(v, cur), k1i = di(cur);
      const double k2v = dv(v + 0.5 * dt * k1v, cur + 0.5 * dt * k1i);
      const double k2i = di(cur + 0.5 * dt * k1i);
      const double k3v = dv(v + 0.5 * dt * k2v, cur + 0.5 * dt * k2i);
      const double k3i = di(cur + 0.5 * dt * k2i);
      const double k4v = dv(v + dt * k3v, cur + dt * k3i);
      const double k4i = di(cur + dt * k3i);
      v += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      cur += dt / 6.0 * (k1i + 2 * k2i + 2 * k3i + k4i);
    }
    if (v >= p.threshold) return k;
  }
  return std::nullopt;
}

/// Second, independently written delivery reference: rows are laid out per
/// (shard, thread, type) in lcid order, and each trace entry walks forward
/// from its lcid while the source id stays the same.
inline spikedel::oracle::BufferImage scalar_walk(
    std::span<const TraceRow> trace, std::span<const DumpRow> dump,
    std::size_t neurons, std::int64_t interval_steps, std::size_t ring_length,
    std::int64_t read_until = 0) {
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>,
           std::vector<DumpRow>>
      arrays;
  for (const DumpRow& r : dump) arrays[{r.shard, r.thread, r.type}].push_back(r);
  for (auto& [key, rows] : arrays) {
    std::sort(rows.begin(), rows.end(),
              [](const DumpRow& a, const DumpRow& b) { return a.lcid < b.lcid; });
  }
  spikedel::oracle::BufferImage img(neurons, ring_length);
  for (const TraceRow& e : trace) {
    const auto& rows = arrays.at({e.shard, e.thread, e.type});
    std::size_t k = e.lcid;
    const auto source = rows.at(k).source;
    for (; k < rows.size() && rows[k].source == source; ++k) {
      const std::int64_t at = e.interval * interval_steps + e.lag + rows[k].delay;
      if (at < read_until) continue;
      img.at(rows[k].target, static_cast<std::size_t>(at) % ring_length) +=
          rows[k].weight;
    }
  }
  return img;
}

inline std::string dump_text(const spikedel::Network& net) {
  std::ostringstream out;
  spikedel::write_connectivity_dump(out, net);
  return out.str();
}

inline std::vector<DumpRow> dump_rows(const spikedel::Network& net) {
  std::istringstream in(dump_text(net));
  return spikedel::read_connectivity_dump(in);
}

/// Counts deliveries per (thread, type, lcid) of one shard.
struct VisitCounter {
  static constexpr bool enabled = true;
  std::vector<std::uint32_t>* visits = nullptr;
  void on_send(std::size_t lcid) { ++(*visits)[lcid]; }
  void on_ring_write() noexcept {}
  void on_hint() noexcept {}
  void on_flush(std::size_t) noexcept {}
};

inline spikedel::NetworkConfig small_config(std::uint32_t shards,
                                            std::uint32_t threads,
                                            std::uint32_t nps,
                                            std::uint32_t ke, std::uint32_t ki,
                                            std::uint64_t seed) {
  spikedel::NetworkConfig c;
  c.shards = shards;
  c.threads_per_shard = threads;
  c.neurons_per_shard = nps;
  c.indegree_exc = ke;
  c.indegree_inh = ki;
  c.seed = seed;
  return c;
}

/// All 49 delivery settings: ref, bwrb x4 x prefetch, lagrb x4, bwts x4,
/// bwtsrb x16 x prefetch, over {1, 2, 16, 64}.
inline std::vector<spikedel::DeliveryStrategy> parameter_grid() {
  using spikedel::Algorithm;
  using spikedel::DeliveryStrategy;
  const std::uint32_t values[] = {1, 2, 16, 64};
  std::vector<DeliveryStrategy> out;
  DeliveryStrategy s;
  s.algorithm = Algorithm::ref;
  out.push_back(s);
  for (bool pf : {false, true}) {
    for (auto b : values) {
      s = {};
      s.algorithm = Algorithm::bwrb;
      s.prefetch = pf;
      s.batch_rb = b;
      out.push_back(s);
    }
  }
  for (auto l : values) {
    s = {};
    s.algorithm = Algorithm::lagrb;
    s.lag = l;
    out.push_back(s);
  }
  for (auto b : values) {
    s = {};
    s.algorithm = Algorithm::bwts;
    s.batch_ts = b;
    out.push_back(s);
  }
  for (bool pf : {false, true}) {
    for (auto bt : values) {
      for (auto br : values) {
        s = {};
        s.algorithm = Algorithm::bwtsrb;
        s.prefetch = pf;
        s.batch_ts = bt;
        s.batch_rb = br;
        out.push_back(s);
      }
    }
  }
  return out;
}

}  // namespace testing_support
