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


#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "spikedel/spikedel.hpp"
#include "support/oracles.hpp"

using namespace spikedel;
using testing_support::parameter_grid;
using testing_support::small_config;

namespace {

struct Interval {
  std::vector<TraceRow> trace;
  std::vector<SpikeReceiveRegister> registers;  // per shard
  Step interval_start = 0;
};

Interval random_interval(const Network& net, std::size_t spikes,
                         std::int64_t interval, std::uint64_t seed) {
  const auto& cfg = net.config;
  std::mt19937_64 rng(seed);
  std::vector<EmittedSpike> emitted;
  for (std::size_t k = 0; k < spikes; ++k) {
    emitted.push_back({static_cast<NeuronId>(rng() % cfg.total_neurons()),
                       static_cast<std::uint8_t>(rng() % cfg.interval_steps())});
  }
  Interval iv;
  iv.interval_start = interval * cfg.interval_steps();
  std::vector<SendLists> send(cfg.shards);
  // emulate per-shard collection: shard s emits the spikes of its neurons
  const Placement p(cfg);
  for (std::uint32_t s = 0; s < cfg.shards; ++s) {
    std::vector<EmittedSpike> mine;
    for (const auto& e : emitted) {
      if (p.shard_of(e.source) == s) mine.push_back(e);
    }
    collect_spikes(mine, net.routing, cfg.shards, send[s], &iv.trace, interval);
  }
  const auto recv = exchange(send);
  for (std::uint32_t s = 0; s < cfg.shards; ++s) {
    iv.registers.push_back(
        sort_into_register(recv[s], cfg.threads_per_shard, cfg.synapse_types));
  }
  return iv;
}

template <class Instr = NoInstrumentation>
oracle::BufferImage deliver_all(const Network& net, const Interval& iv,
                                const DeliveryStrategy& strategy,
                                Instr* instr_out = nullptr) {
  const auto& cfg = net.config;
  const Placement p(cfg);
  std::vector<RingBufferPool> pools;
  for (std::uint32_t vp = 0; vp < p.vps(); ++vp) {
    pools.emplace_back(p.neurons_on_vp(vp, cfg.total_neurons()),
                       cfg.ring_buffer_length());
  }
  Instr instr{};
  visit_strategy(strategy, [&](auto kernel) {
    for (std::uint32_t s = 0; s < cfg.shards; ++s) {
      for (std::uint32_t t = 0; t < cfg.threads_per_shard; ++t) {
        for (std::uint32_t type = 0; type < cfg.synapse_types; ++type) {
          kernel.deliver(iv.registers[s].slice(t, type),
                         net.stores[s].at(t, type), pools[p.vp(s, t)],
                         iv.interval_start, instr);
          EXPECT_EQ(kernel.pending(), 0U);
        }
      }
    }
  });
  if (instr_out) *instr_out = instr;
  oracle::BufferImage img(cfg.total_neurons(), cfg.ring_buffer_length());
  for (std::uint32_t vp = 0; vp < p.vps(); ++vp) {
    for (std::uint32_t j = 0; j < p.neurons_on_vp(vp, cfg.total_neurons()); ++j) {
      const auto src = pools[vp].slots(j);
      std::copy(src.begin(), src.end(), img.row(p.global_id(vp, j)).begin());
    }
  }
  return img;
}

}  // namespace

TEST(Strategy, NamesRoundTrip) {
  for (const auto& name :
       {"ref", "bwrb", "bwrb-pf", "lagrb", "bwts", "bwtsrb", "bwtsrb-pf"}) {
    EXPECT_EQ(DeliveryStrategy::parse(name).name(), name);
  }
  EXPECT_THROW(DeliveryStrategy::parse("fast"), ConfigError);
  const auto set = DeliveryStrategy::benchmark_set();
  std::set<std::string> names;
  for (const auto& s : set) names.insert(s.name());
  EXPECT_EQ(names, (std::set<std::string>{"ref", "bwrb", "bwrb-pf", "lagrb",
                                          "bwts", "bwtsrb-pf"}));
  for (const auto& s : set) {
    EXPECT_EQ(s.batch_rb, 16U);
    EXPECT_EQ(s.batch_ts, 16U);
    EXPECT_EQ(s.lag, 16U);
  }
  DeliveryStrategy bad;
  bad.batch_rb = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_THROW(BatchedSegmentDelivery(0), ConfigError);
  EXPECT_THROW(LaggedRingBufferDelivery(0), ConfigError);
}

TEST(Delivery, GridMatchesOracleWithExactWeights) {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto cfg = small_config(2 + seed % 2, 2, 150, 30, 8, seed);
    cfg.weight_mode = WeightMode::exact;
    cfg.synapse_types = seed == 3 ? 2 : 1;
    const Network net = build_network(cfg);
    const auto iv = random_interval(net, 400, 3, seed * 17);
    const auto rows = testing_support::dump_rows(net);
    oracle::DeliveryMeta meta{cfg.total_neurons(), cfg.interval_steps(),
                              cfg.ring_buffer_length(), 0};
    const auto expected = oracle::naive_deliver(iv.trace, rows, meta);
    ASSERT_GT(expected.nonzero_slots(), 0U);
    for (const auto& s : parameter_grid()) {
      const auto report = oracle::assert_equivalence(expected, deliver_all(net, iv, s));
      EXPECT_TRUE(report.pass()) << s.name() << " brb=" << s.batch_rb
                                 << " bts=" << s.batch_ts << " lag=" << s.lag
                                 << ": " << report.describe();
    }
  }
}

TEST(Delivery, ProductionWeightsAgreeAcrossVariants) {
  auto cfg = small_config(2, 2, 200, 40, 10, 31);
  const Network net = build_network(cfg);
  const auto iv = random_interval(net, 500, 0, 5);
  const auto ref = deliver_all(net, iv, DeliveryStrategy{});
  for (const auto& s : parameter_grid()) {
    const auto img = deliver_all(net, iv, s);
    for (std::size_t k = 0; k < ref.slots.size(); ++k) {
      ASSERT_NEAR(img.slots[k], ref.slots[k], 1e-12 * std::abs(ref.slots[k]))
          << s.name();
    }
    // identical summation order makes them bit-identical in practice
    EXPECT_TRUE(oracle::assert_equivalence(ref, img).pass()) << s.name();
  }
}

TEST(Delivery, TouchOnceAndWriteCounts) {
  auto cfg = small_config(2, 2, 120, 20, 5, 8);
  const Network net = build_network(cfg);
  const auto iv = random_interval(net, 250, 1, 9);
  std::uint64_t expected_touched = 0;
  for (const auto& e : iv.trace) {
    expected_touched +=
        net.stores[e.shard].at(e.thread, e.type).get_ts_size(e.lcid);
  }
  for (const auto& s : parameter_grid()) {
    DeliveryCounters c;
    deliver_all(net, iv, s, &c);
    EXPECT_EQ(c.synapses_touched, expected_touched) << s.name();
    EXPECT_EQ(c.ring_writes, expected_touched) << s.name();
    const bool batched_rb = s.algorithm == Algorithm::bwrb ||
                            s.algorithm == Algorithm::bwtsrb;
    if (s.prefetch && batched_rb) {
      EXPECT_EQ(c.hints_issued, c.flushes * s.batch_rb) << s.name();
    } else {
      EXPECT_EQ(c.hints_issued, 0U) << s.name();
    }
  }
}

TEST(Delivery, FlushCountIsFullBatchesPerSlice) {
  auto cfg = small_config(1, 1, 100, 10, 3, 2);
  const Network net = build_network(cfg);
  const auto iv = random_interval(net, 37, 0, 3);
  std::uint64_t touched = 0;
  for (const auto& e : iv.trace) touched += net.stores[0].at(0, 0).get_ts_size(e.lcid);
  for (std::uint32_t b : {1U, 2U, 16U, 64U}) {
    DeliveryStrategy s;
    s.algorithm = Algorithm::bwrb;
    s.prefetch = true;
    s.batch_rb = b;
    DeliveryCounters c;
    deliver_all(net, iv, s, &c);
    EXPECT_EQ(c.flushes, touched / b);
    EXPECT_EQ(c.hints_issued, (touched / b) * b);
  }
}

TEST(Delivery, TouchOnceWithVisitCounter) {
  auto cfg = small_config(1, 1, 80, 10, 2, 4);
  const Network net = build_network(cfg);
  const auto& arr = net.stores[0].at(0, 0);
  // every segment addressed exactly twice
  std::vector<SpikeEntry> reg;
  for (int rep = 0; rep < 2; ++rep) {
    for (std::uint32_t lcid = 0; lcid < arr.size(); ++lcid) {
      if (arr.is_segment_start(lcid)) reg.push_back({lcid, 0, 0, static_cast<std::uint8_t>(rep)});
    }
  }
  for (const auto& s : parameter_grid()) {
    std::vector<std::uint32_t> visits(arr.size(), 0);
    testing_support::VisitCounter counter{&visits};
    RingBufferPool rings(80, cfg.ring_buffer_length());
    visit_strategy(s, [&](auto kernel) {
      kernel.deliver(reg, arr, rings, 0, counter);
    });
    for (auto v : visits) ASSERT_EQ(v, 2U) << s.name();
  }
}

TEST(Delivery, BatchBoundariesInsideSegments) {
  // three segments of length 3, batch and lag 2: flushes and the pipeline
  // hand-over happen mid-segment
  SynapseArray arr;
  for (std::uint32_t src = 0; src < 3; ++src) {
    for (std::uint32_t k = 0; k < 3; ++k) {
      const double w = static_cast<double>(1 + src * 3 + k) * 0.25;
      arr.synapses.push_back({w, src * 3 + k, 0, 15, false});
      arr.sources.push_back(src);
    }
  }
  arr.finalize_segments();
  const std::vector<SpikeEntry> reg = {{0, 0, 0, 0}, {3, 0, 0, 4}, {6, 0, 0, 14}};
  RingBufferPool expected(9, 30);
  for (const auto& e : reg) {
    for (std::uint32_t k = 0; k < 3; ++k) {
      const auto& syn = arr.synapses[e.lcid + k];
      expected.add_value(syn.target, (30 + e.lag + 15) % 30, syn.weight);
    }
  }
  for (const auto& s : parameter_grid()) {
    if (s.batch_rb != 2 && s.lag != 2 && s.batch_ts != 2) continue;
    RingBufferPool rings(9, 30);
    DeliveryCounters c;
    visit_strategy(s, [&](auto kernel) { kernel.deliver(reg, arr, rings, 30, c); });
    EXPECT_TRUE(std::equal(rings.raw().begin(), rings.raw().end(),
                           expected.raw().begin()))
        << s.name();
    EXPECT_EQ(c.synapses_touched, 9U);
  }
}

TEST(Delivery, RemainderBatchOfSegments) {
  auto cfg = small_config(1, 1, 200, 20, 5, 12);
  const Network net = build_network(cfg);
  const auto& arr = net.stores[0].at(0, 0);
  std::vector<SpikeEntry> reg;
  for (std::uint32_t lcid = 0; lcid < arr.size() && reg.size() < 17; ++lcid) {
    if (arr.is_segment_start(lcid)) reg.push_back({lcid, 0, 0, 3});
  }
  ASSERT_EQ(reg.size(), 17U);
  RingBufferPool a(200, 30), b(200, 30);
  NoInstrumentation none;
  RefDelivery().deliver(reg, arr, a, 0, none);
  BatchedSegmentDelivery(16).deliver(reg, arr, b, 0, none);
  EXPECT_TRUE(std::equal(a.raw().begin(), a.raw().end(), b.raw().begin()));
  RingBufferPool c(200, 30);
  BatchedSegmentRingBufferDelivery<true>(16, 16).deliver(reg, arr, c, 0, none);
  EXPECT_TRUE(std::equal(a.raw().begin(), a.raw().end(), c.raw().begin()));
}

TEST(Delivery, EmptyRegisterChangesNothing) {
  auto cfg = small_config(1, 1, 50, 5, 1, 1);
  const Network net = build_network(cfg);
  for (const auto& s : parameter_grid()) {
    RingBufferPool rings(50, 30);
    NoInstrumentation none;
    visit_strategy(s, [&](auto kernel) {
      kernel.deliver({}, net.stores[0].at(0, 0), rings, 0, none);
      EXPECT_EQ(kernel.pending(), 0U);
    });
    for (double v : rings.raw()) ASSERT_EQ(v, 0.0);
  }
}

TEST(Delivery, CorruptSegmentsAreDetected) {
  SynapseArray arr;
  for (int k = 0; k < 4; ++k) {
    arr.synapses.push_back({1.0, 0, 0, 15, false});
    arr.sources.push_back(7);
  }
  arr.finalize_segments();
  NoInstrumentation none;
  RingBufferPool rings(1, 30);
  const std::vector<SpikeEntry> reg = {{0, 0, 0, 0}};

  SynapseArray runaway = arr;  // chain never terminates
  runaway.synapses.back().subsq = true;
  EXPECT_THROW(RefDelivery().deliver(reg, runaway, rings, 0, none), StoreCorruption);
  EXPECT_THROW(LaggedRingBufferDelivery(2).deliver(reg, runaway, rings, 0, none),
               StoreCorruption);

  SynapseArray zero = arr;
  zero.synapses[0].segment_size = 0;
  EXPECT_THROW(BatchedSegmentDelivery(4).deliver(reg, zero, rings, 0, none),
               StoreCorruption);
  SynapseArray oversize = arr;
  oversize.synapses[0].segment_size = 9;
  EXPECT_THROW((BatchedSegmentRingBufferDelivery<false>(4, 4).deliver(
                   reg, oversize, rings, 0, none)),
               StoreCorruption);
  const std::vector<SpikeEntry> far = {{40, 0, 0, 0}};
  EXPECT_THROW(BatchedSegmentDelivery(4).deliver(far, arr, rings, 0, none),
               StoreCorruption);
}

TEST(DeliveryDeathTest, SubsqDisagreeingWithSizeAborts) {
  SynapseArray arr;
  for (int k = 0; k < 3; ++k) {
    arr.synapses.push_back({1.0, 0, 0, 15, false});
    arr.sources.push_back(1);
  }
  arr.finalize_segments();
  arr.synapses[0].segment_size = 2;  // subsq still says 3
  NoInstrumentation none;
  RingBufferPool rings(1, 30);
  const std::vector<SpikeEntry> reg = {{0, 0, 0, 0}};
  EXPECT_DEATH(BatchedSegmentDelivery(1).deliver(reg, arr, rings, 0, none),
               "subsq disagrees");
}

TEST(Delivery, SpikesLandAtLagPlusDelay) {
  SynapseArray arr;
  arr.synapses.push_back({2.5, 0, 1, 15, false});
  arr.sources.push_back(0);
  arr.finalize_segments();
  for (const auto& s : parameter_grid()) {
    RingBufferPool rings(1, 30);
    NoInstrumentation none;
    const std::vector<SpikeEntry> reg = {{0, 0, 0, 7}};
    visit_strategy(s, [&](auto kernel) { kernel.deliver(reg, arr, rings, 45, none); });
    // step 45 + 7 + 15 = 67, slot 67 mod 30 = 7
    for (std::size_t k = 0; k < 30; ++k) {
      ASSERT_EQ(rings.slots(0)[k], k == 7 ? 2.5 : 0.0) << s.name();
    }
  }
}
