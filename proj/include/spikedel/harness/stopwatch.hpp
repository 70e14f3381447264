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

#include <chrono>

#include "spikedel/common.hpp"

namespace spikedel {

/// Accumulating phase timer on the monotonic clock. Resolution is that of
/// std::chrono::steady_clock (nanoseconds on Linux).
class Stopwatch {
 public:
  using Clock = std::chrono::steady_clock;

  static constexpr double resolution_seconds() {
    return static_cast<double>(Clock::period::num) /
           static_cast<double>(Clock::period::den);
  }

  void start() {
    if (running_) throw UsageError("stopwatch already running");
    running_ = true;
    begin_ = Clock::now();
  }

  /// Stops and returns the duration of the bracket just closed.
  double stop() {
    const auto now = Clock::now();
    if (!running_) throw UsageError("stopwatch stopped before start");
    running_ = false;
    const auto lap = now - begin_;
    accumulated_ += lap;
    return std::chrono::duration<double>(lap).count();
  }

  double elapsed() const {
    auto total = accumulated_;
    if (running_) total += Clock::now() - begin_;
    return std::chrono::duration<double>(total).count();
  }

  bool running() const noexcept { return running_; }

  void reset() noexcept {
    running_ = false;
    accumulated_ = Clock::duration::zero();
  }

 private:
  bool running_ = false;
  Clock::time_point begin_{};
  Clock::duration accumulated_ = Clock::duration::zero();
};

}  // namespace spikedel
