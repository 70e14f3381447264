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

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include "spikedel/spikedel.hpp"
#include "support/oracles.hpp"

using namespace spikedel;

namespace {

RoutingTable three_shard_table() {
  std::vector<std::pair<NeuronId, RoutingEntry>> pairs = {
      {0, {0, 0, 0, 4}}, {0, {1, 1, 0, 0}}, {0, {2, 0, 0, 9}}, {1, {1, 0, 0, 2}}};
  return RoutingTable::from_pairs(3, pairs);
}

bool entry_less(const SpikeEntry& a, const SpikeEntry& b) {
  return std::tie(a.thread, a.type, a.lcid, a.lag) <
         std::tie(b.thread, b.type, b.lcid, b.lag);
}

}  // namespace

TEST(Collect, NoSpikesGiveEmptyLists) {
  SendLists out;
  collect_spikes({}, three_shard_table(), 3, out);
  ASSERT_EQ(out.size(), 3U);
  for (const auto& l : out) EXPECT_TRUE(l.empty());
}

TEST(Collect, FanOutAcrossThreeShards) {
  SendLists out;
  const std::vector<EmittedSpike> spikes = {{0, 7}};
  std::vector<TraceRow> trace;
  collect_spikes(spikes, three_shard_table(), 3, out, &trace, 5);
  std::size_t total = 0;
  for (const auto& l : out) total += l.size();
  EXPECT_EQ(total, 3U);
  ASSERT_EQ(out[1].size(), 1U);
  EXPECT_EQ(out[1][0], (SpikeEntry{0, 1, 0, 7}));
  ASSERT_EQ(trace.size(), 3U);
  EXPECT_EQ(trace[0].interval, 5);
  EXPECT_EQ(trace[0].source, 0U);
  EXPECT_EQ(trace[0].lag, 7U);
}

TEST(Collect, EntryCountEqualsSummedFanOut) {
  auto cfg = testing_support::small_config(3, 2, 200, 20, 5, 6);
  const Network net = build_network(cfg);
  std::mt19937_64 rng(3);
  std::vector<EmittedSpike> spikes;
  std::size_t expected = 0;
  for (int k = 0; k < 300; ++k) {
    const auto src = static_cast<NeuronId>(rng() % cfg.total_neurons());
    spikes.push_back({src, static_cast<std::uint8_t>(rng() % 15)});
    expected += net.routing.targets_of(src).size();
  }
  SendLists out;
  collect_spikes(spikes, net.routing, cfg.shards, out);
  std::size_t total = 0;
  for (const auto& l : out) total += l.size();
  EXPECT_EQ(total, expected);
}

TEST(Collect, UnknownSourceIsRoutingError) {
  SendLists out;
  const std::vector<EmittedSpike> spikes = {{3, 0}};
  EXPECT_THROW(collect_spikes(spikes, three_shard_table(), 3, out), RoutingError);
}

TEST(Exchange, EmptyInEmptyOut) {
  const std::vector<SendLists> send(2, SendLists(2));
  const auto recv = exchange(send);
  ASSERT_EQ(recv.size(), 2U);
  EXPECT_TRUE(recv[0].empty());
  EXPECT_TRUE(recv[1].empty());
}

TEST(Exchange, TwoShardSwap) {
  std::vector<SendLists> send(2, SendLists(2));
  send[0][1].push_back({1, 0, 0, 3});
  send[1][0].push_back({2, 1, 0, 4});
  const auto recv = exchange(send);
  ASSERT_EQ(recv[0].size(), 1U);
  ASSERT_EQ(recv[1].size(), 1U);
  EXPECT_EQ(recv[0][0], (SpikeEntry{2, 1, 0, 4}));
  EXPECT_EQ(recv[1][0], (SpikeEntry{1, 0, 0, 3}));
}

TEST(Exchange, PreservesEntryMultiset) {
  std::mt19937_64 rng(9);
  const std::size_t m = 5;
  std::vector<SendLists> send(m, SendLists(m));
  std::vector<std::vector<SpikeEntry>> expected(m);
  for (int k = 0; k < 2000; ++k) {
    const auto from = rng() % m, to = rng() % m;
    const SpikeEntry e{static_cast<std::uint32_t>(rng() % 100),
                       static_cast<std::uint16_t>(rng() % 3), 0,
                       static_cast<std::uint8_t>(rng() % 15)};
    send[from][to].push_back(e);
    expected[to].push_back(e);
  }
  auto recv = exchange(send);
  for (std::size_t d = 0; d < m; ++d) {
    std::sort(recv[d].begin(), recv[d].end(), entry_less);
    std::sort(expected[d].begin(), expected[d].end(), entry_less);
    EXPECT_EQ(recv[d], expected[d]);
  }
}

TEST(Register, SortPartitionsByThreadAndType) {
  std::mt19937_64 rng(4);
  ReceiveBuffer buf;
  for (int k = 0; k < 500; ++k) {
    buf.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint16_t>(rng() % 4),
                   static_cast<std::uint8_t>(rng() % 2), static_cast<std::uint8_t>(rng() % 15)});
  }
  const auto reg = sort_into_register(buf, 4, 2);
  EXPECT_EQ(reg.total(), buf.size());
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t type = 0; type < 2; ++type) {
      std::vector<SpikeEntry> expect;
      for (const auto& e : buf) {
        if (e.thread == t && e.type == type) expect.push_back(e);
      }
      // arrival order is kept within a slice
      EXPECT_EQ(reg.slice(t, type), expect);
    }
  }
}

TEST(Register, OutOfRangeEntryIsCorruption) {
  ReceiveBuffer buf = {{0, 0, 0, 0}, {1, 5, 0, 0}};
  SpikeReceiveRegister reg(2, 1);
  // every partition sees the bad entry, not only the one it would belong to
  EXPECT_THROW(fill_register_partition(buf, 0, reg), RegisterCorruption);
  EXPECT_THROW(fill_register_partition(buf, 1, reg), RegisterCorruption);
  buf = {{0, 0, 3, 0}};
  EXPECT_THROW(sort_into_register(buf, 2, 1), RegisterCorruption);
}

TEST(Trace, CsvRoundTrip) {
  const std::vector<TraceRow> rows = {{0, 5, 3, 1, 0, 0, 12}, {7, 1999, 14, 0, 1, 1, 0}};
  std::ostringstream out;
  write_spike_trace(out, rows);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), spike_trace_header);
  std::istringstream in(out.str());
  EXPECT_EQ(read_spike_trace(in), rows);
  std::istringstream bad("interval,source\n0,1\n");
  EXPECT_THROW(read_spike_trace(bad), ProvenanceError);
  std::istringstream garbage(std::string(spike_trace_header) + "\n0,x,1,0,0,0,0\n");
  EXPECT_THROW(read_spike_trace(garbage), ProvenanceError);
}
