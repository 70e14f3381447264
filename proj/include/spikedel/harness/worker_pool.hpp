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

#include <barrier>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spikedel {

/// Fork-join pool. The calling thread acts as worker 0; with one worker no
/// threads are spawned and tasks run inline.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers)
      : workers_(workers == 0 ? 1 : workers),
        start_(static_cast<std::ptrdiff_t>(workers_)),
        done_(static_cast<std::ptrdiff_t>(workers_)) {
    for (std::size_t w = 1; w < workers_; ++w) {
      threads_.emplace_back([this, w] { loop(w); });
    }
  }

  ~WorkerPool() {
    if (!threads_.empty()) {
      stop_ = true;
      start_.arrive_and_wait();
      for (auto& t : threads_) t.join();
    }
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const noexcept { return workers_; }

  /// Runs task(worker) on every worker and returns when all are done.
  /// The first exception thrown by any worker is rethrown here.
  void run(const std::function<void(std::size_t)>& task) {
    error_ = nullptr;
    task_ = &task;
    if (workers_ > 1) start_.arrive_and_wait();
    invoke(0);
    if (workers_ > 1) done_.arrive_and_wait();
    task_ = nullptr;
    if (error_) std::rethrow_exception(error_);
  }

 private:
  void loop(std::size_t w) {
    while (true) {
      start_.arrive_and_wait();
      if (stop_) return;
      invoke(w);
      done_.arrive_and_wait();
    }
  }

  void invoke(std::size_t w) {
    try {
      (*task_)(w);
    } catch (...) {
      std::lock_guard lock(error_mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }

  std::size_t workers_;
  std::barrier<> start_;
  std::barrier<> done_;
  std::vector<std::thread> threads_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  bool stop_ = false;
  std::mutex error_mutex_;
  std::exception_ptr error_;
};

}  // namespace spikedel
