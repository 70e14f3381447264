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

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spikedel/connectivity/network.hpp"
#include "spikedel/text.hpp"

namespace spikedel {

/// A spike as emitted by the update phase.
struct EmittedSpike {
  NeuronId source;
  std::uint8_t lag;  // steps since interval start

  friend bool operator==(const EmittedSpike&, const EmittedSpike&) = default;
};

/// What travels between shards: enough to locate one target segment.
struct SpikeEntry {
  std::uint32_t lcid;
  std::uint16_t thread;
  std::uint8_t type;
  std::uint8_t lag;

  friend bool operator==(const SpikeEntry&, const SpikeEntry&) = default;
};

using SendLists = std::vector<std::vector<SpikeEntry>>;  // [destination shard]
using ReceiveBuffer = std::vector<SpikeEntry>;

inline constexpr std::string_view spike_trace_header =
    "interval,source,lag,shard,thread,type,lcid";

struct TraceRow {
  std::int64_t interval;
  NeuronId source;
  std::uint32_t lag;
  std::uint32_t shard;
  std::uint32_t thread;
  std::uint32_t type;
  std::uint32_t lcid;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// Fans each spike out over its routing entries. `out` is resized to the
/// shard count and cleared first. When `trace` is non-null one row per
/// produced entry is appended to it.
inline void collect_spikes(std::span<const EmittedSpike> spikes,
                           const RoutingTable& routing, std::size_t shards,
                           SendLists& out,
                           std::vector<TraceRow>* trace = nullptr,
                           std::int64_t interval = 0) {
  out.resize(shards);
  for (auto& list : out) list.clear();
  for (const EmittedSpike& spike : spikes) {
    for (const RoutingEntry& r : routing.targets_of(spike.source)) {
      out[r.shard].push_back({r.lcid, r.thread, r.type, spike.lag});
      if (trace) {
        trace->push_back({interval, spike.source, spike.lag, r.shard,
                          r.thread, r.type, r.lcid});
      }
    }
  }
}

/// In-memory all-to-all: shard d receives the concatenation, in source-shard
/// order, of everything addressed to it.
inline void exchange(const std::vector<SendLists>& send,
                     std::vector<ReceiveBuffer>& recv) {
  const std::size_t shards = send.size();
  recv.resize(shards);
  for (std::size_t d = 0; d < shards; ++d) {
    std::size_t total = 0;
    for (std::size_t s = 0; s < shards; ++s) total += send[s].at(d).size();
    recv[d].clear();
    recv[d].reserve(total);
    for (std::size_t s = 0; s < shards; ++s) {
      recv[d].insert(recv[d].end(), send[s][d].begin(), send[s][d].end());
    }
  }
}

inline std::vector<ReceiveBuffer> exchange(const std::vector<SendLists>& send) {
  std::vector<ReceiveBuffer> recv;
  spikedel::exchange(send, recv);
  return recv;
}

/// Spike entries of one shard partitioned by (hosting thread, synapse type).
class SpikeReceiveRegister {
 public:
  SpikeReceiveRegister() = default;
  SpikeReceiveRegister(std::size_t threads, std::size_t types)
      : types_(types), lists_(threads * types) {}

  std::size_t threads() const noexcept {
    return types_ == 0 ? 0 : lists_.size() / types_;
  }
  std::size_t types() const noexcept { return types_; }

  std::vector<SpikeEntry>& slice(std::size_t thread, std::size_t type) {
    return lists_[thread * types_ + type];
  }
  const std::vector<SpikeEntry>& slice(std::size_t thread,
                                       std::size_t type) const {
    return lists_[thread * types_ + type];
  }

  std::size_t total() const noexcept {
    std::size_t n = 0;
    for (const auto& l : lists_) n += l.size();
    return n;
  }

  friend bool operator==(const SpikeReceiveRegister&,
                         const SpikeReceiveRegister&) = default;

 private:
  std::size_t types_ = 0;
  std::vector<std::vector<SpikeEntry>> lists_;
};

/// Write-exclusive partition of the register fill: the worker hosting
/// `thread` scans the whole buffer and copies only its own entries, in
/// buffer order. Every worker validates every entry, so corruption is
/// reported no matter which worker would have owned it.
inline void fill_register_partition(const ReceiveBuffer& buffer,
                                    std::size_t thread,
                                    SpikeReceiveRegister& reg) {
  const std::size_t threads = reg.threads();
  const std::size_t types = reg.types();
  for (std::size_t type = 0; type < types; ++type) {
    reg.slice(thread, type).clear();
  }
  for (const SpikeEntry& e : buffer) {
    if (e.thread >= threads || e.type >= types) {
      throw RegisterCorruption("spike entry addresses thread " +
                               std::to_string(e.thread) + " type " +
                               std::to_string(e.type) + " outside register");
    }
    if (e.thread == thread) reg.slice(thread, e.type).push_back(e);
  }
}

inline SpikeReceiveRegister sort_into_register(const ReceiveBuffer& buffer,
                                               std::size_t threads,
                                               std::size_t types = 1) {
  SpikeReceiveRegister reg(threads, types);
  for (std::size_t t = 0; t < threads; ++t) {
    fill_register_partition(buffer, t, reg);
  }
  return reg;
}

inline void write_spike_trace(std::ostream& out,
                              std::span<const TraceRow> rows,
                              bool with_header = true) {
  if (with_header) out << spike_trace_header << '\n';
  for (const TraceRow& r : rows) {
    out << r.interval << ',' << r.source << ',' << r.lag << ',' << r.shard
        << ',' << r.thread << ',' << r.type << ',' << r.lcid << '\n';
  }
}

inline std::vector<TraceRow> read_spike_trace(std::istream& in) {
  std::vector<TraceRow> rows;
  for (const auto& line : text::read_csv_body(in, spike_trace_header)) {
    const auto f = text::split(line);
    if (f.size() != 7) {
      throw ProvenanceError("spike trace row has wrong arity: " + line);
    }
    rows.push_back({text::parse_number<std::int64_t>(f[0], "interval"),
                    text::parse_number<NeuronId>(f[1], "source"),
                    text::parse_number<std::uint32_t>(f[2], "lag"),
                    text::parse_number<std::uint32_t>(f[3], "shard"),
                    text::parse_number<std::uint32_t>(f[4], "thread"),
                    text::parse_number<std::uint32_t>(f[5], "type"),
                    text::parse_number<std::uint32_t>(f[6], "lcid")});
  }
  return rows;
}

}  // namespace spikedel
