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

#include <sstream>

#include "spikedel/spikedel.hpp"
#include "support/golden.hpp"

using namespace spikedel;

TEST(Golden, ReferenceInstanceReproduces) {
  const auto cfg = golden::reference_instance();
  const Network net = build_network(cfg.network);
  std::ostringstream dump;
  write_connectivity_dump(dump, net);
  EXPECT_EQ(golden::fnv1a(dump.str()), golden::reference_dump_fnv);
  const auto rec = Simulation(net, cfg).run();
  EXPECT_EQ(rec.spikes, golden::reference_spike_count);
  EXPECT_EQ(rec.spike_hash, golden::reference_spike_hash);
}
