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
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "spikedel/connectivity/network.hpp"
#include "spikedel/text.hpp"

namespace spikedel {

inline constexpr std::string_view connectivity_dump_header =
    "source,target,shard,thread,type,lcid,weight,delay";

/// One row of the connectivity dump; `target` and `source` are global ids.
struct DumpRow {
  NeuronId source;
  NeuronId target;
  std::uint32_t shard;
  std::uint32_t thread;
  std::uint32_t type;
  std::uint32_t lcid;
  double weight;
  std::uint32_t delay;
};

/// Rows ordered by (shard, thread, type, lcid). Weights use the shortest
/// round-trip representation, so the listing is exact and byte-stable.
inline void write_connectivity_dump(std::ostream& out, const Network& net) {
  const Placement p = net.placement();
  out << connectivity_dump_header << '\n';
  std::string line;
  for (std::uint32_t s = 0; s < net.stores.size(); ++s) {
    const SynapseStore& store = net.stores[s];
    for (std::uint32_t t = 0; t < store.threads(); ++t) {
      const std::uint32_t vp = p.vp(s, t);
      for (std::uint32_t type = 0; type < store.types(); ++type) {
        const SynapseArray& arr = store.at(t, type);
        for (std::size_t lcid = 0; lcid < arr.size(); ++lcid) {
          const Synapse& syn = arr.synapses[lcid];
          line.clear();
          line += std::to_string(arr.sources[lcid]);
          line += ',';
          line += std::to_string(p.global_id(vp, syn.target));
          line += ',';
          line += std::to_string(s);
          line += ',';
          line += std::to_string(t);
          line += ',';
          line += std::to_string(type);
          line += ',';
          line += std::to_string(lcid);
          line += ',';
          line += text::format_double(syn.weight);
          line += ',';
          line += std::to_string(static_cast<unsigned>(syn.delay));
          line += '\n';
          out << line;
        }
      }
    }
  }
}

inline std::vector<DumpRow> read_connectivity_dump(std::istream& in) {
  std::vector<DumpRow> rows;
  for (const auto& line : text::read_csv_body(in, connectivity_dump_header)) {
    const auto f = text::split(line);
    if (f.size() != 8) {
      throw ProvenanceError("connectivity dump row has wrong arity: " + line);
    }
    rows.push_back({text::parse_number<NeuronId>(f[0], "source"),
                    text::parse_number<NeuronId>(f[1], "target"),
                    text::parse_number<std::uint32_t>(f[2], "shard"),
                    text::parse_number<std::uint32_t>(f[3], "thread"),
                    text::parse_number<std::uint32_t>(f[4], "type"),
                    text::parse_number<std::uint32_t>(f[5], "lcid"),
                    text::parse_number<double>(f[6], "weight"),
                    text::parse_number<std::uint32_t>(f[7], "delay")});
  }
  return rows;
}

}  // namespace spikedel
