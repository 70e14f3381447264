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

// Spike-delivery kernels. Each consumes one (thread, synapse type) slice of
// the spike-receive register and adds synaptic weights into the ring buffers
// of the neurons hosted by that thread.
//
// Step names used in comments:
//   TS   iteration over one target segment
//   SYN  reading one synapse (target locator, delay, weight, subsq)
//   RB   adding the weight into the target's ring buffer
//   RB*  prefetch hint for the ring-buffer slot about to be written
//
// A spike with lag l in the interval starting at step s lands at absolute
// step s + l + delay. All kernels perform the RB additions in the same
// global order, so their ring-buffer images agree bit for bit.

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spikedel/common.hpp"
#include "spikedel/connectivity/synapse.hpp"
#include "spikedel/core/ring_buffer.hpp"
#include "spikedel/delivery/prefetch.hpp"
#include "spikedel/exchange/exchange.hpp"

namespace spikedel {

namespace detail {

[[noreturn]] inline void segment_overrun(std::size_t lcid) {
  throw StoreCorruption("target segment overruns synapse array at lcid " +
                        std::to_string(lcid));
}

/// Synaptic information buffered between SYN and RB. `offset` is lag plus
/// delay, i.e. the landing step relative to the interval start.
struct AuxBuffers {
  std::vector<std::uint32_t> target_rb;
  std::vector<std::uint16_t> offset;
  std::vector<double> weight;

  explicit AuxBuffers(std::size_t n) : target_rb(n), offset(n), weight(n) {}

  void store(std::size_t i, const SendResult& s, std::uint8_t lag) noexcept {
    target_rb[i] = s.target;
    offset[i] = static_cast<std::uint16_t>(lag + s.delay);
    weight[i] = s.weight;
  }

  template <class Instr>
  void add_to_ring(std::size_t i, RingBufferPool& rings, Step interval_start,
                   Instr& instr) const noexcept {
    rings.add_value(target_rb[i], rings.position(interval_start + offset[i]),
                    weight[i]);
    instr.on_ring_write();
  }
};

/// RB* then RB over the first `count` aux slots.
template <bool Prefetch, class Instr>
inline void flush_batch(const AuxBuffers& aux, std::size_t count,
                        RingBufferPool& rings, Step interval_start,
                        Instr& instr) noexcept {
  if constexpr (Prefetch) {
    for (std::size_t k = 0; k < count; ++k) {
      prefetch_hint(rings.slot_address(
          aux.target_rb[k], rings.position(interval_start + aux.offset[k])));
      instr.on_hint();
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    aux.add_to_ring(k, rings, interval_start, instr);
  }
}

inline void check_batch(std::size_t batch) {
  if (batch == 0) throw ConfigError("batch size and lag must be >= 1");
}

}  // namespace detail

/// Reference delivery: per synapse, SYN immediately followed by RB.
class RefDelivery {
 public:
  template <class Instr>
  void deliver(std::span<const SpikeEntry> reg, const SynapseArray& synapses,
               RingBufferPool& rings, Step interval_start, Instr& instr) {
    const std::size_t n = synapses.size();
    for (const SpikeEntry& spike : reg) {
      std::size_t lcid = spike.lcid;
      const Step base = interval_start + spike.lag;
      bool subsq = true;
      while (subsq) {  // TS
        if (lcid >= n) detail::segment_overrun(lcid);
        const SendResult s = synapses[lcid].send();  // SYN
        instr.on_send(lcid);
        subsq = s.subsq;
        ++lcid;
        rings.add_value(s.target, rings.position(base + s.delay),
                        s.weight);  // RB
        instr.on_ring_write();
      }
    }
  }

  std::size_t pending() const noexcept { return 0; }
};

/// Batchwise access to ring buffers: SYN results fill aux arrays of size
/// B_RB regardless of segment boundaries; every full batch is flushed with
/// optional group prefetching, and the remainder is drained at the end.
template <bool Prefetch>
class BatchedRingBufferDelivery {
 public:
  explicit BatchedRingBufferDelivery(std::size_t batch_rb)
      : batch_(batch_rb), aux_((detail::check_batch(batch_rb), batch_rb)) {}

  template <class Instr>
  void deliver(std::span<const SpikeEntry> reg, const SynapseArray& synapses,
               RingBufferPool& rings, Step interval_start, Instr& instr) {
    const std::size_t n = synapses.size();
    std::size_t i = 0;
    for (const SpikeEntry& spike : reg) {
      std::size_t lcid = spike.lcid;
      bool subsq = true;
      while (subsq) {  // TS
        if (lcid >= n) detail::segment_overrun(lcid);
        const SendResult s = synapses[lcid].send();  // SYN
        instr.on_send(lcid);
        aux_.store(i, s, spike.lag);
        subsq = s.subsq;
        ++i;
        ++lcid;
        if (i == batch_) {
          detail::flush_batch<Prefetch>(aux_, batch_, rings, interval_start,
                                        instr);
          instr.on_flush(batch_);
          i = 0;
        }
      }
    }
    pending_ = i;
    for (std::size_t k = 0; k < i; ++k) {
      aux_.add_to_ring(k, rings, interval_start, instr);
      --pending_;
    }
  }

  std::size_t batch() const noexcept { return batch_; }
  std::size_t pending() const noexcept { return pending_; }

 private:
  std::size_t batch_;
  detail::AuxBuffers aux_;
  std::size_t pending_ = 0;
};

/// Software-pipelined delivery: SYN runs `lag` synapses ahead of RB, with the
/// aux arrays (size lag + 1) used as a circular queue. The first `lag` SYN
/// steps of a call fill the queue; afterwards each SYN is followed by one RB
/// on the oldest entry. Leftovers are drained after the register loop.
class LaggedRingBufferDelivery {
 public:
  explicit LaggedRingBufferDelivery(std::size_t lag)
      : lag_(lag), aux_((detail::check_batch(lag), lag + 1)) {}

  template <class Instr>
  void deliver(std::span<const SpikeEntry> reg, const SynapseArray& synapses,
               RingBufferPool& rings, Step interval_start, Instr& instr) {
    const std::size_t n = synapses.size();
    const std::size_t capacity = lag_ + 1;
    std::size_t i = 0;  // write index
    std::size_t j = 0;  // read index
    std::size_t filled = 0;
    bool is_init = true;
    for (const SpikeEntry& spike : reg) {
      std::size_t lcid = spike.lcid;
      bool subsq = true;
      while (subsq) {  // TS
        if (lcid >= n) detail::segment_overrun(lcid);
        const SendResult s = synapses[lcid].send();  // SYN
        instr.on_send(lcid);
        aux_.store(i, s, spike.lag);
        subsq = s.subsq;
        i = (i + 1 == capacity) ? 0 : i + 1;
        ++lcid;
        if (is_init) {
          if (++filled == lag_) is_init = false;
        } else {
          assert(i == j);  // queue holds lag + 1 entries right after SYN
          aux_.add_to_ring(j, rings, interval_start, instr);  // RB
          j = (j + 1 == capacity) ? 0 : j + 1;
        }
      }
    }
    pending_ = (i + capacity - j) % capacity;
    while (j != i) {
      aux_.add_to_ring(j, rings, interval_start, instr);
      j = (j + 1 == capacity) ? 0 : j + 1;
      --pending_;
    }
  }

  std::size_t lag() const noexcept { return lag_; }
  std::size_t pending() const noexcept { return pending_; }

 private:
  std::size_t lag_;
  detail::AuxBuffers aux_;
  std::size_t pending_ = 0;
};

namespace detail {

/// Per-batch arrays shared by the segment-batched kernels.
struct SegmentBatch {
  std::vector<std::uint32_t> lcid;
  std::vector<std::uint32_t> ts_size;
  std::vector<std::uint8_t> lag;

  explicit SegmentBatch(std::size_t n) : lcid(n), ts_size(n), lag(n) {}

  /// First two fixed-count loops: gather segment starts, then sizes.
  void gather(std::span<const SpikeEntry> reg, std::size_t first,
              std::size_t width, const SynapseArray& synapses) {
    for (std::size_t k = 0; k < width; ++k) {
      lcid[k] = reg[first + k].lcid;
      lag[k] = reg[first + k].lag;
    }
    const std::size_t n = synapses.size();
    for (std::size_t k = 0; k < width; ++k) {
      if (lcid[k] >= n) segment_overrun(lcid[k]);
      ts_size[k] = synapses.get_ts_size(lcid[k]);
      if (ts_size[k] == 0 || lcid[k] + ts_size[k] > n) {
        throw StoreCorruption("segment size inconsistent at lcid " +
                              std::to_string(lcid[k]));
      }
    }
  }
};

}  // namespace detail

/// Batchwise access to target segments: register entries are processed in
/// batches of B_TS through three fixed-count loops, and each segment is
/// walked by a loop of known trip count instead of following subsq.
class BatchedSegmentDelivery {
 public:
  explicit BatchedSegmentDelivery(std::size_t batch_ts)
      : batch_(batch_ts), ts_((detail::check_batch(batch_ts), batch_ts)) {}

  template <class Instr>
  void deliver(std::span<const SpikeEntry> reg, const SynapseArray& synapses,
               RingBufferPool& rings, Step interval_start, Instr& instr) {
    const std::size_t count = reg.size();
    std::size_t l = 0;
    for (std::size_t b = 0; b < count / batch_; ++b) {
      process(reg, l, batch_, synapses, rings, interval_start, instr);
      l += batch_;
    }
    if (l < count) {
      process(reg, l, count - l, synapses, rings, interval_start, instr);
    }
  }

  std::size_t batch() const noexcept { return batch_; }
  std::size_t pending() const noexcept { return 0; }

 private:
  template <class Instr>
  void process(std::span<const SpikeEntry> reg, std::size_t first,
               std::size_t width, const SynapseArray& synapses,
               RingBufferPool& rings, Step interval_start, Instr& instr) {
    ts_.gather(reg, first, width, synapses);
    for (std::size_t k = 0; k < width; ++k) {
      const Step base = interval_start + ts_.lag[k];
      const std::uint32_t size = ts_.ts_size[k];
      for (std::uint32_t r = 0; r < size; ++r) {  // TS, fixed count
        const SendResult s = synapses[ts_.lcid[k]].send();  // SYN
        instr.on_send(ts_.lcid[k]);
        assert(s.subsq == (r + 1 < size) && "subsq disagrees with ts_size");
        ++ts_.lcid[k];
        rings.add_value(s.target, rings.position(base + s.delay),
                        s.weight);  // RB
        instr.on_ring_write();
      }
    }
  }

  std::size_t batch_;
  detail::SegmentBatch ts_;
};

/// Loop structure of BatchedSegmentDelivery with the per-synapse body of
/// BatchedRingBufferDelivery.
template <bool Prefetch>
class BatchedSegmentRingBufferDelivery {
 public:
  BatchedSegmentRingBufferDelivery(std::size_t batch_ts, std::size_t batch_rb)
      : batch_ts_(batch_ts),
        batch_rb_(batch_rb),
        ts_((detail::check_batch(batch_ts), batch_ts)),
        aux_((detail::check_batch(batch_rb), batch_rb)) {}

  template <class Instr>
  void deliver(std::span<const SpikeEntry> reg, const SynapseArray& synapses,
               RingBufferPool& rings, Step interval_start, Instr& instr) {
    const std::size_t count = reg.size();
    std::size_t l = 0;
    std::size_t i = 0;
    for (std::size_t b = 0; b < count / batch_ts_; ++b) {
      process(reg, l, batch_ts_, i, synapses, rings, interval_start, instr);
      l += batch_ts_;
    }
    if (l < count) {
      process(reg, l, count - l, i, synapses, rings, interval_start, instr);
    }
    pending_ = i;
    for (std::size_t k = 0; k < i; ++k) {
      aux_.add_to_ring(k, rings, interval_start, instr);
      --pending_;
    }
  }

  std::size_t batch_ts() const noexcept { return batch_ts_; }
  std::size_t batch_rb() const noexcept { return batch_rb_; }
  std::size_t pending() const noexcept { return pending_; }

 private:
  template <class Instr>
  void process(std::span<const SpikeEntry> reg, std::size_t first,
               std::size_t width, std::size_t& i, const SynapseArray& synapses,
               RingBufferPool& rings, Step interval_start, Instr& instr) {
    ts_.gather(reg, first, width, synapses);
    for (std::size_t k = 0; k < width; ++k) {
      const std::uint32_t size = ts_.ts_size[k];
      for (std::uint32_t r = 0; r < size; ++r) {  // TS, fixed count
        const SendResult s = synapses[ts_.lcid[k]].send();  // SYN
        instr.on_send(ts_.lcid[k]);
        assert(s.subsq == (r + 1 < size) && "subsq disagrees with ts_size");
        aux_.store(i, s, ts_.lag[k]);
        ++i;
        ++ts_.lcid[k];
        if (i == batch_rb_) {
          detail::flush_batch<Prefetch>(aux_, batch_rb_, rings,
                                        interval_start, instr);
          instr.on_flush(batch_rb_);
          i = 0;
        }
      }
    }
  }

  std::size_t batch_ts_;
  std::size_t batch_rb_;
  detail::SegmentBatch ts_;
  detail::AuxBuffers aux_;
  std::size_t pending_ = 0;
};

}  // namespace spikedel
