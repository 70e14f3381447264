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
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "spikedel/harness/simulation.hpp"
#include "spikedel/text.hpp"

namespace spikedel {

inline constexpr std::string_view results_csv_header =
    "variant,brb,bts,lag,shards,threads,neurons_per_shard,seed,rep,"
    "update_s,communicate_s,deliver_s,total_s,spikes,rate_hz,cpi";

inline std::string results_csv_row(const RunRecord& r) {
  const auto& c = r.config;
  const auto& n = c.network;
  const auto& t = r.timings;
  std::string s;
  s += c.strategy.name();
  for (auto v : {c.strategy.batch_rb, c.strategy.batch_ts, c.strategy.lag,
                 n.shards, n.threads_per_shard, n.neurons_per_shard}) {
    s += ',';
    s += std::to_string(v);
  }
  s += ',' + std::to_string(n.seed);
  s += ',' + std::to_string(r.rep);
  for (double v : {t.update_s, t.communicate_s, t.deliver_s, t.total_s}) {
    s += ',';
    s += text::format_double(v);
  }
  s += ',' + std::to_string(r.spikes);
  s += ',' + text::format_double(r.rate_hz);
  s += ',';
  if (r.cpi) s += text::format_double(*r.cpi);
  return s;
}

inline void write_results_csv(std::ostream& out,
                              const std::vector<RunRecord>& records,
                              bool with_header = true) {
  if (with_header) out << results_csv_header << '\n';
  for (const auto& r : records) out << results_csv_row(r) << '\n';
}

inline nlohmann::json to_json(const RunRecord& r) {
  const auto& c = r.config;
  const auto& n = c.network;
  const auto& nrn = c.neuron;
  nlohmann::json j;
  j["variant"] = c.strategy.name();
  j["brb"] = c.strategy.batch_rb;
  j["bts"] = c.strategy.batch_ts;
  j["lag"] = c.strategy.lag;
  j["shards"] = n.shards;
  j["threads"] = n.threads_per_shard;
  j["neurons_per_shard"] = n.neurons_per_shard;
  j["seed"] = n.seed;
  j["rep"] = r.rep;
  j["network"] = {{"excitatory_fraction", n.excitatory_fraction},
                  {"indegree_exc", n.indegree_exc},
                  {"indegree_inh", n.indegree_inh},
                  {"weight_exc", n.weight_exc},
                  {"g", n.g},
                  {"delay_ms", n.delay_ms},
                  {"h_ms", n.resolution_ms},
                  {"synapse_types", n.synapse_types},
                  {"weights", n.weight_mode == WeightMode::exact ? "exact"
                                                                 : "production"}};
  j["neuron"] = {{"capacitance", nrn.capacitance},
                 {"tau_membrane", nrn.tau_membrane},
                 {"tau_synapse", nrn.tau_synapse},
                 {"refractory_period", nrn.refractory_period},
                 {"threshold", nrn.threshold},
                 {"reset_potential", nrn.reset_potential},
                 {"resting_potential", nrn.resting_potential},
                 {"external_current", nrn.external_current}};
  j["bio_time_s"] = c.biological_time_s;
  j["workers"] = c.workers;
  j["intervals"] = r.intervals;
  j["update_s"] = r.timings.update_s;
  j["communicate_s"] = r.timings.communicate_s;
  j["deliver_s"] = r.timings.deliver_s;
  j["total_s"] = r.timings.total_s;
  j["spikes"] = r.spikes;
  j["rate_hz"] = r.rate_hz;
  j["spike_hash"] = r.spike_hash;
  j["cpi"] = r.cpi ? nlohmann::json(*r.cpi) : nlohmann::json(nullptr);
  if (r.counters) {
    j["counters"] = {{"synapses_touched", r.counters->synapses_touched},
                     {"ring_writes", r.counters->ring_writes},
                     {"hints_issued", r.counters->hints_issued},
                     {"flushes", r.counters->flushes}};
  }
  j["host"] = {{"hostname", r.host.hostname},
               {"hardware_threads", r.host.hardware_threads},
               {"compiler", r.host.compiler}};
  return j;
}

struct PhaseStats {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single value
  double min = 0.0;
};

inline PhaseStats phase_stats(const std::vector<double>& xs) {
  PhaseStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  s.min = xs.front();
  for (double x : xs) {
    sum += x;
    s.min = std::min(s.min, x);
  }
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

inline double relative_change(double t_variant, double t_ref) {
  return (t_variant - t_ref) / t_ref;
}

/// One sweep point: repetitions of one strategy at one network size.
struct SweepPoint {
  std::string variant;
  std::uint32_t brb = 0, bts = 0, lag = 0;
  std::uint32_t shards = 0, threads = 0, neurons_per_shard = 0;
  std::uint64_t synapses = 0;
  double mean_segment_length = 0.0;
  std::uint32_t reps = 0;
  PhaseStats update, communicate, deliver, total;
  std::optional<double> rel_change_deliver;  // vs ref at the same point
  std::optional<double> rel_change_total;
  std::string status = "ok";  // "ok" or "error: ..."
  std::vector<RunRecord> runs;
};

inline constexpr std::string_view sweep_csv_header =
    "variant,brb,bts,lag,shards,threads,neurons_per_shard,synapses,"
    "mean_segment_length,reps,update_mean_s,update_sd_s,communicate_mean_s,"
    "communicate_sd_s,deliver_mean_s,deliver_sd_s,deliver_min_s,total_mean_s,"
    "total_sd_s,rel_change_deliver,rel_change_total,status";

inline void summarize(SweepPoint& p) {
  std::vector<double> u, c, d, t;
  for (const auto& r : p.runs) {
    u.push_back(r.timings.update_s);
    c.push_back(r.timings.communicate_s);
    d.push_back(r.timings.deliver_s);
    t.push_back(r.timings.total_s);
  }
  p.reps = static_cast<std::uint32_t>(p.runs.size());
  p.update = phase_stats(u);
  p.communicate = phase_stats(c);
  p.deliver = phase_stats(d);
  p.total = phase_stats(t);
}

/// Fills the relative-change columns against the "ref" point with equal
/// (shards, threads, neurons_per_shard).
inline void attach_relative_change(std::vector<SweepPoint>& points) {
  using Key = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;
  std::map<Key, const SweepPoint*> ref;
  for (const auto& p : points) {
    if (p.variant == "ref" && p.status == "ok" && p.reps > 0) {
      ref[{p.shards, p.threads, p.neurons_per_shard}] = &p;
    }
  }
  for (auto& p : points) {
    const auto it = ref.find({p.shards, p.threads, p.neurons_per_shard});
    if (it == ref.end() || p.status != "ok" || p.reps == 0) continue;
    if (it->second->deliver.mean > 0.0) {
      p.rel_change_deliver =
          relative_change(p.deliver.mean, it->second->deliver.mean);
    }
    if (it->second->total.mean > 0.0) {
      p.rel_change_total = relative_change(p.total.mean, it->second->total.mean);
    }
  }
}

inline void write_sweep_csv(std::ostream& out,
                            const std::vector<SweepPoint>& points) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? text::format_double(*v) : std::string();
  };
  out << sweep_csv_header << '\n';
  for (const auto& p : points) {
    std::string s = p.variant;
    for (std::uint64_t v :
         {std::uint64_t{p.brb}, std::uint64_t{p.bts}, std::uint64_t{p.lag},
          std::uint64_t{p.shards}, std::uint64_t{p.threads},
          std::uint64_t{p.neurons_per_shard}, p.synapses}) {
      s += ',' + std::to_string(v);
    }
    s += ',' + text::format_double(p.mean_segment_length);
    s += ',' + std::to_string(p.reps);
    for (double v : {p.update.mean, p.update.sd, p.communicate.mean,
                     p.communicate.sd, p.deliver.mean, p.deliver.sd,
                     p.deliver.min, p.total.mean, p.total.sd}) {
      s += ',' + text::format_double(v);
    }
    s += ',' + opt(p.rel_change_deliver);
    s += ',' + opt(p.rel_change_total);
    std::string status = p.status;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    s += ',' + status;
    out << s << '\n';
  }
}

}  // namespace spikedel
