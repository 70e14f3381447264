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

namespace spikedel {

/// Delivery kernels are templates over an instrumentation policy. This one
/// compiles away and is what timed runs use.
struct NoInstrumentation {
  static constexpr bool enabled = false;
  void on_send(std::size_t) noexcept {}
  void on_ring_write() noexcept {}
  void on_hint() noexcept {}
  void on_flush(std::size_t) noexcept {}
};

struct DeliveryCounters {
  static constexpr bool enabled = true;
  std::uint64_t synapses_touched = 0;
  std::uint64_t ring_writes = 0;
  std::uint64_t hints_issued = 0;
  std::uint64_t flushes = 0;  // full batches only; drains are not counted

  void on_send(std::size_t) noexcept { ++synapses_touched; }
  void on_ring_write() noexcept { ++ring_writes; }
  void on_hint() noexcept { ++hints_issued; }
  void on_flush(std::size_t) noexcept { ++flushes; }

  DeliveryCounters& operator+=(const DeliveryCounters& o) noexcept {
    synapses_touched += o.synapses_touched;
    ring_writes += o.ring_writes;
    hints_issued += o.hints_issued;
    flushes += o.flushes;
    return *this;
  }

  friend bool operator==(const DeliveryCounters&,
                         const DeliveryCounters&) = default;
};

}  // namespace spikedel
