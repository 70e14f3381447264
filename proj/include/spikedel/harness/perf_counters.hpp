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

#include <atomic>
#include <cstdint>
#include <optional>
#include <utility>

#if defined(__linux__)
#include <linux/perf_event.h>
#include <sys/ioctl.h>
#include <sys/syscall.h>
#include <unistd.h>

#include <cstring>
#endif

namespace spikedel {

/// Cycles / instructions-retired counting for the calling thread, as a CPI
/// analogue. Availability depends on the kernel and its perf_event policy;
/// when counters cannot be opened, `available()` is false and no value is
/// ever reported.
class ThreadCycleCounter {
 public:
  ThreadCycleCounter() {
#if defined(__linux__)
    cycles_fd_ = open_counter(PERF_COUNT_HW_CPU_CYCLES, -1);
    if (cycles_fd_ >= 0) {
      instr_fd_ = open_counter(PERF_COUNT_HW_INSTRUCTIONS, cycles_fd_);
      if (instr_fd_ < 0) {
        ::close(cycles_fd_);
        cycles_fd_ = -1;
      }
    }
#endif
  }

  ~ThreadCycleCounter() {
#if defined(__linux__)
    if (instr_fd_ >= 0) ::close(instr_fd_);
    if (cycles_fd_ >= 0) ::close(cycles_fd_);
#endif
  }

  ThreadCycleCounter(const ThreadCycleCounter&) = delete;
  ThreadCycleCounter& operator=(const ThreadCycleCounter&) = delete;

  bool available() const noexcept { return cycles_fd_ >= 0; }

  void begin() noexcept {
#if defined(__linux__)
    if (!available()) return;
    ::ioctl(cycles_fd_, PERF_EVENT_IOC_RESET, PERF_IOC_FLAG_GROUP);
    ::ioctl(cycles_fd_, PERF_EVENT_IOC_ENABLE, PERF_IOC_FLAG_GROUP);
#endif
  }

  /// Returns (cycles, instructions) since begin().
  std::optional<std::pair<std::uint64_t, std::uint64_t>> end() noexcept {
#if defined(__linux__)
    if (!available()) return std::nullopt;
    ::ioctl(cycles_fd_, PERF_EVENT_IOC_DISABLE, PERF_IOC_FLAG_GROUP);
    std::uint64_t cycles = 0;
    std::uint64_t instructions = 0;
    if (::read(cycles_fd_, &cycles, sizeof cycles) != sizeof cycles ||
        ::read(instr_fd_, &instructions, sizeof instructions) !=
            sizeof instructions) {
      return std::nullopt;
    }
    return std::pair{cycles, instructions};
#else
    return std::nullopt;
#endif
  }

 private:
#if defined(__linux__)
  static int open_counter(std::uint64_t config, int group_fd) {
    perf_event_attr attr;
    std::memset(&attr, 0, sizeof attr);
    attr.type = PERF_TYPE_HARDWARE;
    attr.size = sizeof attr;
    attr.config = config;
    attr.disabled = group_fd < 0 ? 1 : 0;
    attr.exclude_kernel = 1;
    attr.exclude_hv = 1;
    return static_cast<int>(
        ::syscall(SYS_perf_event_open, &attr, 0, -1, group_fd, 0));
  }
#endif
  int cycles_fd_ = -1;
  int instr_fd_ = -1;
};

/// Sums per-thread cycle/instruction counts across workers.
class CpiAccumulator {
 public:
  void add(std::uint64_t cycles, std::uint64_t instructions) noexcept {
    cycles_.fetch_add(cycles, std::memory_order_relaxed);
    instructions_.fetch_add(instructions, std::memory_order_relaxed);
    samples_.fetch_add(1, std::memory_order_relaxed);
  }
  void mark_unavailable() noexcept { unavailable_.store(true); }

  std::optional<double> cpi() const noexcept {
    if (unavailable_.load() || samples_.load() == 0 ||
        instructions_.load() == 0) {
      return std::nullopt;
    }
    return static_cast<double>(cycles_.load()) /
           static_cast<double>(instructions_.load());
  }

 private:
  std::atomic<std::uint64_t> cycles_{0};
  std::atomic<std::uint64_t> instructions_{0};
  std::atomic<std::uint64_t> samples_{0};
  std::atomic<bool> unavailable_{false};
};

}  // namespace spikedel
