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
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "spikedel/common.hpp"
#include "spikedel/connectivity/network.hpp"
#include "spikedel/core/neuron.hpp"
#include "spikedel/delivery/strategy.hpp"
#include "spikedel/text.hpp"

namespace spikedel {

struct SimConfig {
  NetworkConfig network;
  NeuronParams neuron;
  double biological_time_s = 1.0;
  DeliveryStrategy strategy;
  std::uint32_t repetitions = 3;
  std::uint32_t workers = 1;
  std::string output_path;
  std::string trace_path;
  bool record_spikes = false;
  bool counters = false;
  bool cpi = false;

  double h() const noexcept { return network.resolution_ms; }
  double delay() const noexcept { return network.delay_ms; }

  std::int64_t intervals() const {
    if (!(biological_time_s >= 0.0) || !(network.delay_ms > 0.0)) {
      throw ConfigError("biological time must be non-negative and delay positive");
    }
    // Partial trailing intervals are run in full.
    const double ratio = biological_time_s * 1000.0 / network.delay_ms;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, rounded)) {
      return static_cast<std::int64_t>(rounded);
    }
    return static_cast<std::int64_t>(std::ceil(ratio));
  }

  /// Biological time actually covered by intervals(), in seconds.
  double simulated_time_s() const {
    return static_cast<double>(intervals()) * network.delay_ms / 1000.0;
  }

  void validate() const {
    network.validate();
    neuron.validate();
    strategy.validate();
    (void)intervals();
    if (repetitions == 0) throw ConfigError("repetitions must be >= 1");
  }
};

namespace detail {

template <class T>
T parse_config_number(std::string_view key, std::string_view value) {
  try {
    return text::parse_number<T>(value, "value");
  } catch (const ProvenanceError&) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " +
                      std::string(key));
  }
}

inline bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean '" + std::string(v) + "' for " +
                    std::string(key));
}

}  // namespace detail

/// Applies one key/value setting. Keys match the long CLI flag names with
/// '-' replaced by '_'.
inline void apply_setting(SimConfig& cfg, std::string_view key,
                          std::string_view value) {
  using detail::parse_config_number;
  auto& net = cfg.network;
  auto& nrn = cfg.neuron;
  using Setter = std::function<void(std::string_view)>;
  auto u32 = [&](std::uint32_t& field) -> Setter {
    return [&field, key](std::string_view v) {
      field = parse_config_number<std::uint32_t>(key, v);
    };
  };
  auto f64 = [&](double& field) -> Setter {
    return [&field, key](std::string_view v) {
      field = parse_config_number<double>(key, v);
    };
  };
  const std::map<std::string_view, Setter> setters = {
      {"shards", u32(net.shards)},
      {"threads", u32(net.threads_per_shard)},
      {"neurons_per_shard", u32(net.neurons_per_shard)},
      {"excitatory_fraction", f64(net.excitatory_fraction)},
      {"indegree_exc", u32(net.indegree_exc)},
      {"indegree_inh", u32(net.indegree_inh)},
      {"weight_exc", f64(net.weight_exc)},
      {"g", f64(net.g)},
      {"delay", f64(net.delay_ms)},
      {"h", f64(net.resolution_ms)},
      {"synapse_types", u32(net.synapse_types)},
      {"seed",
       [&](std::string_view v) {
         net.seed = parse_config_number<std::uint64_t>(key, v);
       }},
      {"weights",
       [&](std::string_view v) {
         if (v == "production") {
           net.weight_mode = WeightMode::production;
         } else if (v == "exact") {
           net.weight_mode = WeightMode::exact;
         } else {
           throw ConfigError("weights must be 'production' or 'exact'");
         }
       }},
      {"capacitance", f64(nrn.capacitance)},
      {"tau_membrane", f64(nrn.tau_membrane)},
      {"tau_synapse", f64(nrn.tau_synapse)},
      {"refractory_period", f64(nrn.refractory_period)},
      {"threshold", f64(nrn.threshold)},
      {"reset_potential", f64(nrn.reset_potential)},
      {"resting_potential", f64(nrn.resting_potential)},
      {"external_current", f64(nrn.external_current)},
      {"bio_time", f64(cfg.biological_time_s)},
      {"variant",
       [&](std::string_view v) {
         const auto parsed = DeliveryStrategy::parse(v);
         cfg.strategy.algorithm = parsed.algorithm;
         cfg.strategy.prefetch = parsed.prefetch;
       }},
      {"brb", u32(cfg.strategy.batch_rb)},
      {"bts", u32(cfg.strategy.batch_ts)},
      {"lag", u32(cfg.strategy.lag)},
      {"reps", u32(cfg.repetitions)},
      {"workers", u32(cfg.workers)},
      {"out", [&](std::string_view v) { cfg.output_path = std::string(v); }},
      {"trace", [&](std::string_view v) { cfg.trace_path = std::string(v); }},
      {"record_spikes",
       [&](std::string_view v) { cfg.record_spikes = detail::parse_bool(key, v); }},
      {"counters",
       [&](std::string_view v) { cfg.counters = detail::parse_bool(key, v); }},
      {"cpi", [&](std::string_view v) { cfg.cpi = detail::parse_bool(key, v); }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
  it->second(value);
}

/// Reads `key = value` lines. Blank lines, `#` comments and `[section]`
/// headers are ignored; values may be double-quoted.
inline void load_config(std::istream& in, SimConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = text::trim(view);
    if (view.empty() || view.front() == '[') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const auto key = text::trim(view.substr(0, eq));
    auto value = text::trim(view.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    apply_setting(cfg, key, value);
  }
}

inline void load_config_file(const std::string& path, SimConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  load_config(in, cfg);
}

}  // namespace spikedel
