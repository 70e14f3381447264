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

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spikedel/common.hpp"

namespace spikedel {

// Smallest length with no read/write collision when spikes are exchanged
// every `interval_steps` and take effect up to `max_delay_steps` later.
constexpr std::size_t ring_length(Step max_delay_steps, Step interval_steps) {
  return static_cast<std::size_t>(max_delay_steps + interval_steps);
}

/// Per-neuron circular accumulator of delayed synaptic input. Non-owning view
/// into a RingBufferPool; slot k holds the input due at every absolute step s
/// with s mod L == k.
class SpikeRingBuffer {
 public:
  SpikeRingBuffer() = default;
  explicit SpikeRingBuffer(std::span<double> slots) : slots_(slots) {}

  std::size_t length() const noexcept { return slots_.size(); }

  std::size_t position(Step absolute_step) const noexcept {
    return static_cast<std::size_t>(absolute_step) % slots_.size();
  }

  void add_value(std::size_t position, double weight) noexcept {
    assert(position < slots_.size() && "ring buffer position out of range");
    slots_[position] += weight;
  }

  double read_and_clear(Step step) noexcept {
    double& slot = slots_[position(step)];
    const double value = slot;
    slot = 0.0;
    return value;
  }

  double slot(std::size_t position) const { return slots_[position]; }
  std::span<const double> slots() const noexcept { return slots_; }
  double* slot_address(std::size_t position) noexcept {
    return slots_.data() + position;
  }

 private:
  std::span<double> slots_;
};

inline void ring_add_value(SpikeRingBuffer rb, std::size_t position,
                           double weight) noexcept {
  rb.add_value(position, weight);
}

inline double ring_read_and_clear(SpikeRingBuffer rb, Step step) noexcept {
  return rb.read_and_clear(step);
}

/// Contiguous storage for the ring buffers of all neurons hosted by one
/// thread. Buffers are laid out back to back with stride L, so the address
/// of any slot is computable from (locator, position) without a load.
class RingBufferPool {
 public:
  RingBufferPool() = default;
  RingBufferPool(std::size_t neurons, std::size_t length)
      : neurons_(neurons), length_(length), slots_(neurons * length, 0.0) {
    assert(length > 0);
  }

  std::size_t size() const noexcept { return neurons_; }
  std::size_t length() const noexcept { return length_; }

  SpikeRingBuffer operator[](std::size_t neuron) noexcept {
    return SpikeRingBuffer(
        std::span<double>(slots_.data() + neuron * length_, length_));
  }

  std::size_t position(Step absolute_step) const noexcept {
    return static_cast<std::size_t>(absolute_step) % length_;
  }

  void add_value(std::uint32_t neuron, std::size_t position,
                 double weight) noexcept {
    assert(neuron < neurons_ && position < length_);
    slots_[neuron * length_ + position] += weight;
  }

  const double* slot_address(std::uint32_t neuron,
                             std::size_t position) const noexcept {
    return slots_.data() + neuron * length_ + position;
  }

  std::span<const double> slots(std::size_t neuron) const noexcept {
    return {slots_.data() + neuron * length_, length_};
  }
  std::span<const double> raw() const noexcept { return slots_; }

 private:
  std::size_t neurons_ = 0;
  std::size_t length_ = 0;
  std::vector<double> slots_;
};

}  // namespace spikedel
