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

#include <cstdint>
#include <exception>
#include <functional>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "spikedel/connectivity/census.hpp"
#include "spikedel/connectivity/network.hpp"
#include "spikedel/harness/results.hpp"
#include "spikedel/harness/simulation.hpp"

namespace spikedel {

/// Called after every finished repetition; for progress output.
using SweepProgress = std::function<void(const SweepPoint&, const RunRecord&)>;

/// Weak scaling: `neurons_per_shard` stays fixed while the shard count grows.
/// Each network is built once and shared by all strategies at that point.
/// Failures become error rows instead of aborting the sweep.
inline std::vector<SweepPoint> weak_scaling_sweep(
    const SimConfig& base, const std::vector<std::uint32_t>& shard_counts,
    const std::vector<DeliveryStrategy>& strategies,
    const SweepProgress& progress = {}) {
  for (std::size_t k = 1; k < shard_counts.size(); ++k) {
    if (shard_counts[k] <= shard_counts[k - 1]) {
      throw ConfigError("shard counts must be strictly ascending");
    }
  }
  std::vector<SweepPoint> points;
  for (std::uint32_t m : shard_counts) {
    SimConfig cfg = base;
    cfg.network.shards = m;
    const auto make_point = [&](const DeliveryStrategy& s) {
      SweepPoint p;
      p.variant = s.name();
      p.brb = s.batch_rb;
      p.bts = s.batch_ts;
      p.lag = s.lag;
      p.shards = m;
      p.threads = cfg.network.threads_per_shard;
      p.neurons_per_shard = cfg.network.neurons_per_shard;
      return p;
    };

    std::optional<Network> net;
    std::string build_error;
    try {
      cfg.validate();
      net.emplace(build_network(cfg.network, cfg.workers));
    } catch (const std::bad_alloc&) {
      build_error = "error: out of memory building network";
    } catch (const std::exception& e) {
      build_error = std::string("error: ") + e.what();
    }
    const SegmentCensus census =
        net ? segment_length_census(*net) : SegmentCensus{};

    for (const auto& s : strategies) {
      SweepPoint p = make_point(s);
      if (!net) {
        p.status = build_error;
        points.push_back(std::move(p));
        continue;
      }
      p.synapses = net->synapse_count();
      p.mean_segment_length = census.mean_length();
      cfg.strategy = s;
      try {
        Simulation sim(*net, cfg);
        for (std::uint32_t rep = 0; rep < cfg.repetitions; ++rep) {
          p.runs.push_back(sim.run(rep));
          const auto failures = self_check(p.runs.back());
          if (!failures.empty()) {
            p.status = "error: self-check: " + failures.front();
          }
          if (progress) progress(p, p.runs.back());
        }
      } catch (const std::bad_alloc&) {
        p.status = "error: out of memory";
      } catch (const std::exception& e) {
        p.status = std::string("error: ") + e.what();
      }
      summarize(p);
      points.push_back(std::move(p));
    }
  }
  attach_relative_change(points);
  return points;
}

}  // namespace spikedel
