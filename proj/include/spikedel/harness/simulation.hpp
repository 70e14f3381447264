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
#include <atomic>
#include <barrier>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#if defined(__unix__)
#include <unistd.h>
#endif

#include "spikedel/connectivity/network.hpp"
#include "spikedel/core/neuron.hpp"
#include "spikedel/core/ring_buffer.hpp"
#include "spikedel/delivery/instrumentation.hpp"
#include "spikedel/delivery/strategy.hpp"
#include "spikedel/exchange/exchange.hpp"
#include "spikedel/harness/config.hpp"
#include "spikedel/harness/perf_counters.hpp"
#include "spikedel/harness/stopwatch.hpp"
#include "spikedel/harness/worker_pool.hpp"
#include "spikedel/oracle/buffer_image.hpp"

namespace spikedel {

struct IntervalTiming {
  double update_s = 0.0;
  double communicate_s = 0.0;
  double deliver_s = 0.0;
  double total_s = 0.0;
};

/// Wall-clock cost of the three phases, per interval and summed.
struct PhaseTimings {
  std::vector<IntervalTiming> per_interval;
  double update_s = 0.0;
  double communicate_s = 0.0;
  double deliver_s = 0.0;
  double total_s = 0.0;

  void aggregate() {
    update_s = communicate_s = deliver_s = total_s = 0.0;
    for (const auto& t : per_interval) {
      update_s += t.update_s;
      communicate_s += t.communicate_s;
      deliver_s += t.deliver_s;
      total_s += t.total_s;
    }
  }
};

struct RecordedSpike {
  Step step;
  NeuronId neuron;

  friend bool operator==(const RecordedSpike&, const RecordedSpike&) = default;
  friend auto operator<=>(const RecordedSpike&, const RecordedSpike&) = default;
};

/// Order-independent hash of a spike train (sum of per-spike mixes), so
/// shards can contribute in any order.
inline std::uint64_t spike_hash_term(Step step, NeuronId neuron) noexcept {
  return mix64((static_cast<std::uint64_t>(step) << 32) ^ neuron);
}

struct HostInfo {
  std::string hostname;
  unsigned hardware_threads = 0;
  std::string compiler;

  static HostInfo current() {
    HostInfo h;
#if defined(__unix__)
    char buf[256] = {};
    if (::gethostname(buf, sizeof buf - 1) == 0) h.hostname = buf;
#endif
    h.hardware_threads = std::thread::hardware_concurrency();
#if defined(__clang__)
    h.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
    h.compiler = "gcc " __VERSION__;
#else
    h.compiler = "unknown";
#endif
    return h;
  }
};

struct RunRecord {
  SimConfig config;
  std::uint32_t rep = 0;
  PhaseTimings timings;
  std::int64_t intervals = 0;
  std::uint64_t neurons = 0;
  std::uint64_t spikes = 0;
  double rate_hz = 0.0;
  std::uint64_t spike_hash = 0;
  std::optional<double> cpi;
  std::optional<DeliveryCounters> counters;
  std::uint64_t barrier_events = 0;
  std::uint64_t entries_sent = 0;       // sum of routing fan-out over spikes
  std::uint64_t entries_registered = 0; // entries sorted into registers
  std::size_t max_pending_after_drain = 0;
  HostInfo host;
  std::vector<RecordedSpike> spike_train;  // only with record_spikes
};

/// Drives the update -> communicate -> deliver cycle over emulated shards.
/// The network is shared read-only; neuron state and ring buffers are owned
/// here and reset at the start of every run.
class Simulation {
 public:
  Simulation(const Network& net, SimConfig cfg)
      : net_(net), cfg_(std::move(cfg)) {
    cfg_.network = net.config;
    cfg_.validate();
    prop_ = propagator_init(cfg_.neuron, cfg_.h());
  }

  /// Keeps every exchanged spike entry in memory for trace()
  void capture_trace(bool on) { capture_trace_ = on; }
  const std::vector<TraceRow>& trace() const noexcept { return trace_; }

  RunRecord run(std::uint32_t rep = 0) {
    return visit_strategy(cfg_.strategy, [&](auto kernel) {
      if (cfg_.counters) return run_impl<DeliveryCounters>(kernel, rep);
      return run_impl<NoInstrumentation>(kernel, rep);
    });
  }

  /// Current ring-buffer content of every neuron, by global id.
  oracle::BufferImage ring_image() const {
    const Placement p = net_.placement();
    oracle::BufferImage img(net_.config.total_neurons(),
                            net_.config.ring_buffer_length());
    for (const auto& vp : vps_) {
      for (std::size_t j = 0; j < vp.neurons.size(); ++j) {
        const auto src = vp.rings.slots(j);
        const NeuronId gid = p.global_id(vp.index, static_cast<std::uint32_t>(j));
        std::copy(src.begin(), src.end(), img.row(gid).begin());
      }
    }
    return img;
  }

  std::vector<NeuronState> neuron_states() const {
    const Placement p = net_.placement();
    std::vector<NeuronState> out(net_.config.total_neurons());
    for (const auto& vp : vps_) {
      for (std::size_t j = 0; j < vp.neurons.size(); ++j) {
        out[p.global_id(vp.index, static_cast<std::uint32_t>(j))] =
            vp.neurons[j];
      }
    }
    return out;
  }

  const SimConfig& config() const noexcept { return cfg_; }

 private:
  struct VpState {
    std::uint32_t index = 0;
    std::uint32_t shard = 0;
    std::uint32_t thread = 0;
    std::vector<NeuronState> neurons;
    RingBufferPool rings;
    std::vector<EmittedSpike> spikes;  // current interval
    std::vector<RecordedSpike> recorded;
    std::uint64_t spike_count = 0;
    std::uint64_t hash = 0;
  };

  struct ShardState {
    std::vector<EmittedSpike> spikes;
    SendLists send;
    ReceiveBuffer recv;
    SpikeReceiveRegister reg;
    std::vector<TraceRow> trace;
    std::uint64_t entries_sent = 0;
  };

  void reset_state() {
    const NetworkConfig& nc = net_.config;
    const Placement p(nc);
    const std::size_t length = nc.ring_buffer_length();
    vps_.assign(p.vps(), VpState{});
    for (std::uint32_t v = 0; v < p.vps(); ++v) {
      VpState& vp = vps_[v];
      vp.index = v;
      vp.shard = p.shard_of_vp(v);
      vp.thread = p.thread_of_vp(v);
      const std::uint32_t n = p.neurons_on_vp(v, nc.total_neurons());
      vp.neurons.resize(n);
      for (std::uint32_t j = 0; j < n; ++j) {
        vp.neurons[j] =
            initial_neuron_state(cfg_.neuron, nc.seed, p.global_id(v, j));
      }
      vp.rings = RingBufferPool(n, length);
    }
    shards_.assign(nc.shards, ShardState{});
    for (auto& s : shards_) {
      s.reg = SpikeReceiveRegister(nc.threads_per_shard, nc.synapse_types);
    }
    trace_.clear();
  }

  void update_vp(VpState& vp, Step interval_start, Step interval_steps,
                 std::uint32_t vps) {
    vp.spikes.clear();
    for (std::size_t j = 0; j < vp.neurons.size(); ++j) {
      NeuronState& state = vp.neurons[j];
      SpikeRingBuffer rb = vp.rings[j];
      const NeuronId gid = static_cast<NeuronId>(j * vps + vp.index);
      for (Step lag = 0; lag < interval_steps; ++lag) {
        const Step step = interval_start + lag;
        const double input = rb.read_and_clear(step);
        if (neuron_update(state, cfg_.neuron, prop_, input)) {
          vp.spikes.push_back({gid, static_cast<std::uint8_t>(lag)});
          ++vp.spike_count;
          vp.hash += spike_hash_term(step, gid);
          if (cfg_.record_spikes) vp.recorded.push_back({step, gid});
        }
      }
    }
  }

  template <class Instr, class Kernel>
  RunRecord run_impl(const Kernel& prototype, std::uint32_t rep) {
    reset_state();
    const NetworkConfig& nc = net_.config;
    const Placement p(nc);
    const std::size_t workers = std::max<std::size_t>(1, cfg_.workers);
    const Step d = nc.interval_steps();
    const std::int64_t intervals = cfg_.intervals();
    const std::uint32_t types = nc.synapse_types;

    WorkerPool pool(workers);
    std::vector<Kernel> kernels(workers, prototype);
    std::vector<Instr> instr(workers);
    std::vector<std::size_t> max_pending(workers, 0);
    std::vector<std::uint64_t> registered(workers, 0);
    CpiAccumulator cpi;

    std::uint64_t barrier_events = 0;
    auto on_sync = [&barrier_events]() noexcept { ++barrier_events; };
    std::barrier sync(static_cast<std::ptrdiff_t>(workers), on_sync);
    std::atomic<bool> sort_failed{false};
    std::exception_ptr sort_error;
    std::mutex sort_error_mutex;

    Step interval_start = 0;
    auto update_task = [&](std::size_t w) {
      for (std::size_t v = w; v < vps_.size(); v += workers) {
        update_vp(vps_[v], interval_start, d, p.vps());
      }
    };
    auto collect_task = [&](std::size_t w) {
      for (std::size_t s = w; s < shards_.size(); s += workers) {
        ShardState& sh = shards_[s];
        sh.spikes.clear();
        for (std::uint32_t t = 0; t < nc.threads_per_shard; ++t) {
          const auto& src = vps_[p.vp(static_cast<std::uint32_t>(s), t)].spikes;
          sh.spikes.insert(sh.spikes.end(), src.begin(), src.end());
        }
        std::vector<TraceRow>* trace = capture_trace_ ? &sh.trace : nullptr;
        if (trace) trace->clear();
        collect_spikes(sh.spikes, net_.routing, nc.shards, sh.send, trace,
                       interval_start / d);
        for (const auto& list : sh.send) sh.entries_sent += list.size();
      }
    };
    auto deliver_task = [&](std::size_t w) {
      try {
        for (std::size_t v = w; v < vps_.size(); v += workers) {
          VpState& vp = vps_[v];
          ShardState& sh = shards_[vp.shard];
          fill_register_partition(sh.recv, vp.thread, sh.reg);
        }
      } catch (...) {
        std::lock_guard lock(sort_error_mutex);
        if (!sort_error) sort_error = std::current_exception();
        sort_failed = true;
      }
      // Single synchronization point between register fill and delivery.
      sync.arrive_and_wait();
      if (sort_failed) return;

      std::optional<ThreadCycleCounter> counter;
      if (cfg_.cpi) {
        counter.emplace();
        if (!counter->available()) cpi.mark_unavailable();
        counter->begin();
      }
      for (std::size_t v = w; v < vps_.size(); v += workers) {
        VpState& vp = vps_[v];
        ShardState& sh = shards_[vp.shard];
        const SynapseStore& store = net_.stores[vp.shard];
        for (std::uint32_t type = 0; type < types; ++type) {
          const auto& slice = sh.reg.slice(vp.thread, type);
          registered[w] += slice.size();
          kernels[w].deliver(slice, store.at(vp.thread, type), vp.rings,
                             interval_start, instr[w]);
          max_pending[w] = std::max(max_pending[w], kernels[w].pending());
        }
      }
      if (counter) {
        if (auto c = counter->end()) cpi.add(c->first, c->second);
      }
    };

    RunRecord rec;
    rec.config = cfg_;
    rec.rep = rep;
    rec.intervals = intervals;
    rec.neurons = nc.total_neurons();
    rec.host = HostInfo::current();
    rec.timings.per_interval.resize(static_cast<std::size_t>(intervals));

    std::vector<SendLists> send(nc.shards);
    std::vector<ReceiveBuffer> recv;
    Stopwatch total, update, communicate, deliver;
    for (std::int64_t k = 0; k < intervals; ++k) {
      interval_start = k * d;
      IntervalTiming& t = rec.timings.per_interval[static_cast<std::size_t>(k)];
      total.start();

      update.start();
      pool.run(update_task);
      t.update_s = update.stop();

      communicate.start();
      pool.run(collect_task);
      for (std::size_t s = 0; s < shards_.size(); ++s) {
        send[s].swap(shards_[s].send);
      }
      spikedel::exchange(send, recv);
      for (std::size_t s = 0; s < shards_.size(); ++s) {
        send[s].swap(shards_[s].send);
        shards_[s].recv.swap(recv[s]);
      }
      t.communicate_s = communicate.stop();

      deliver.start();
      pool.run(deliver_task);
      t.deliver_s = deliver.stop();

      t.total_s = total.stop();
      if (sort_error) std::rethrow_exception(sort_error);
      if (capture_trace_) {
        for (auto& sh : shards_) {
          trace_.insert(trace_.end(), sh.trace.begin(), sh.trace.end());
        }
      }
    }
    rec.timings.aggregate();

    for (const auto& vp : vps_) {
      rec.spikes += vp.spike_count;
      rec.spike_hash += vp.hash;
      if (cfg_.record_spikes) {
        rec.spike_train.insert(rec.spike_train.end(), vp.recorded.begin(),
                               vp.recorded.end());
      }
    }
    std::sort(rec.spike_train.begin(), rec.spike_train.end());
    const double seconds = cfg_.simulated_time_s();
    rec.rate_hz = (seconds > 0.0 && rec.neurons > 0)
                      ? static_cast<double>(rec.spikes) /
                            (static_cast<double>(rec.neurons) * seconds)
                      : 0.0;
    rec.barrier_events = barrier_events;
    for (const auto& sh : shards_) rec.entries_sent += sh.entries_sent;
    for (auto r : registered) rec.entries_registered += r;
    rec.max_pending_after_drain =
        *std::max_element(max_pending.begin(), max_pending.end());
    if constexpr (Instr::enabled) {
      DeliveryCounters sum;
      for (const auto& c : instr) sum += c;
      rec.counters = sum;
    }
    rec.cpi = cpi.cpi();
    return rec;
  }

  const Network& net_;
  SimConfig cfg_;
  PropagatorMatrix prop_;
  std::vector<VpState> vps_;
  std::vector<ShardState> shards_;
  bool capture_trace_ = false;
  std::vector<TraceRow> trace_;
};

/// Invariant self-checks on a finished run. Returns human-readable failures;
/// empty means all passed.
inline std::vector<std::string> self_check(const RunRecord& rec) {
  std::vector<std::string> failures;
  if (rec.barrier_events != static_cast<std::uint64_t>(rec.intervals)) {
    failures.push_back("expected one register/delivery barrier per interval, got " +
                       std::to_string(rec.barrier_events) + " for " +
                       std::to_string(rec.intervals) + " intervals");
  }
  if (rec.entries_sent != rec.entries_registered) {
    failures.push_back("spike entries not conserved: sent " +
                       std::to_string(rec.entries_sent) + ", registered " +
                       std::to_string(rec.entries_registered));
  }
  if (rec.max_pending_after_drain != 0) {
    failures.push_back("aux buffers not drained after delivery");
  }
  PhaseTimings again = rec.timings;
  again.aggregate();
  if (again.update_s != rec.timings.update_s ||
      again.communicate_s != rec.timings.communicate_s ||
      again.deliver_s != rec.timings.deliver_s ||
      again.total_s != rec.timings.total_s) {
    failures.push_back("aggregated timings differ from per-interval sums");
  }
  for (const auto& t : rec.timings.per_interval) {
    if (t.update_s < 0 || t.communicate_s < 0 || t.deliver_s < 0 ||
        t.total_s + 1e-9 < t.update_s + t.communicate_s + t.deliver_s) {
      failures.push_back("phase timers not contained in interval total");
      break;
    }
  }
  if (rec.counters) {
    const auto& c = *rec.counters;
    if (c.synapses_touched != c.ring_writes) {
      failures.push_back("synapse reads and ring-buffer writes differ");
    }
    const auto& s = rec.config.strategy;
    const bool hints = s.prefetch && (s.algorithm == Algorithm::bwrb ||
                                      s.algorithm == Algorithm::bwtsrb);
    const std::uint64_t expected_hints = hints ? c.flushes * s.batch_rb : 0;
    if (c.hints_issued != expected_hints) {
      failures.push_back("prefetch hint count differs from B_RB per flush");
    }
  }
  return failures;
}

inline RunRecord run_simulation(const SimConfig& cfg, std::uint32_t rep = 0) {
  const Network net = build_network(cfg.network, cfg.workers);
  Simulation sim(net, cfg);
  return sim.run(rep);
}

}  // namespace spikedel
