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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spikedel/common.hpp"
#include "spikedel/delivery/algorithms.hpp"

namespace spikedel {

enum class Algorithm { ref, bwrb, lagrb, bwts, bwtsrb };

/// Delivery algorithm plus its tuning parameters. Defaults (16) are the
/// best-performing batch and lag sizes reported for the older
/// microarchitecture.
struct DeliveryStrategy {
  Algorithm algorithm = Algorithm::ref;
  std::uint32_t batch_rb = 16;
  std::uint32_t batch_ts = 16;
  std::uint32_t lag = 16;
  bool prefetch = false;

  void validate() const {
    if (batch_rb < 1 || batch_ts < 1 || lag < 1) {
      throw ConfigError("B_RB, B_TS and lag must be >= 1");
    }
  }

  /// CLI / CSV name: ref, bwrb, bwrb-pf, lagrb, bwts, bwtsrb, bwtsrb-pf.
  std::string name() const {
    switch (algorithm) {
      case Algorithm::ref: return "ref";
      case Algorithm::bwrb: return prefetch ? "bwrb-pf" : "bwrb";
      case Algorithm::lagrb: return "lagrb";
      case Algorithm::bwts: return "bwts";
      case Algorithm::bwtsrb: return prefetch ? "bwtsrb-pf" : "bwtsrb";
    }
    return "?";
  }

  static DeliveryStrategy parse(std::string_view name) {
    DeliveryStrategy s;
    if (name == "ref") {
      s.algorithm = Algorithm::ref;
    } else if (name == "bwrb" || name == "bwrb-pf") {
      s.algorithm = Algorithm::bwrb;
      s.prefetch = name == "bwrb-pf";
    } else if (name == "lagrb") {
      s.algorithm = Algorithm::lagrb;
    } else if (name == "bwts") {
      s.algorithm = Algorithm::bwts;
    } else if (name == "bwtsrb" || name == "bwtsrb-pf") {
      s.algorithm = Algorithm::bwtsrb;
      s.prefetch = name == "bwtsrb-pf";
    } else {
      throw ConfigError("unknown delivery variant '" + std::string(name) + "'");
    }
    return s;
  }

  /// The six settings compared in benchmark sweeps.
  static std::vector<DeliveryStrategy> benchmark_set() {
    std::vector<DeliveryStrategy> out;
    for (const char* n : {"ref", "bwrb", "bwrb-pf", "lagrb", "bwts",
                          "bwtsrb-pf"}) {
      out.push_back(parse(n));
    }
    return out;
  }

  friend bool operator==(const DeliveryStrategy&,
                         const DeliveryStrategy&) = default;
};

/// Resolves the strategy once and hands `f` a prototype kernel of the
/// concrete type, so the caller's inner loops are monomorphic.
template <class F>
decltype(auto) visit_strategy(const DeliveryStrategy& s, F&& f) {
  s.validate();
  switch (s.algorithm) {
    case Algorithm::ref:
      return std::forward<F>(f)(RefDelivery{});
    case Algorithm::bwrb:
      if (s.prefetch) {
        return std::forward<F>(f)(BatchedRingBufferDelivery<true>(s.batch_rb));
      }
      return std::forward<F>(f)(BatchedRingBufferDelivery<false>(s.batch_rb));
    case Algorithm::lagrb:
      return std::forward<F>(f)(LaggedRingBufferDelivery(s.lag));
    case Algorithm::bwts:
      return std::forward<F>(f)(BatchedSegmentDelivery(s.batch_ts));
    case Algorithm::bwtsrb:
      if (s.prefetch) {
        return std::forward<F>(f)(
            BatchedSegmentRingBufferDelivery<true>(s.batch_ts, s.batch_rb));
      }
      return std::forward<F>(f)(
          BatchedSegmentRingBufferDelivery<false>(s.batch_ts, s.batch_rb));
  }
  throw ConfigError("unknown delivery algorithm");
}

}  // namespace spikedel
