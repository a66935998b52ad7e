// Copyright 2026 The incluster Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace incluster {

class Timeout : public std::runtime_error {
 public:
  Timeout() : std::runtime_error("search timed out") {}
};

/// Shared by every branch of one solver run: branch counters, a
/// cooperative deadline, and a worker count.
class SearchControl {
 public:
  SearchControl() = default;
  explicit SearchControl(std::optional<std::chrono::milliseconds> timeout,
                         unsigned workers = 1)
      : workers_(std::max(1U, workers)) {
    if (timeout) deadline_ = std::chrono::steady_clock::now() + *timeout;
  }

  /// Counts one branch and throws Timeout once the deadline has passed.
  /// The clock is consulted every 256 calls.
  void checkpoint() {
    const auto n = branches_.fetch_add(1, std::memory_order_relaxed);
    if (cancelled_.load(std::memory_order_relaxed)) throw Timeout();
    if (deadline_ && (n & 255U) == 0 &&
        std::chrono::steady_clock::now() > *deadline_) {
      cancelled_.store(true, std::memory_order_relaxed);
      throw Timeout();
    }
  }

  void cancel() noexcept { cancelled_.store(true); }
  std::uint64_t branches() const noexcept { return branches_.load(); }
  unsigned workers() const noexcept { return workers_; }

 private:
  std::atomic<std::uint64_t> branches_{0};
  std::atomic<bool> cancelled_{false};
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  unsigned workers_ = 1;
};

inline void checkpoint(SearchControl* ctl) {
  if (ctl != nullptr) ctl->checkpoint();
}

/// Runs task(i) for i in [0, count) on up to `workers` threads and returns
/// the smallest i whose task returned true. Tasks with an index above the
/// best success so far are skipped, so the answer is the same as a
/// sequential scan regardless of the worker count.
template <typename Task>
std::optional<std::size_t> first_success(std::size_t count, unsigned workers,
                                         Task&& task) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      if (task(i)) return i;
    }
    return std::nullopt;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{kNone};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || i > best.load()) return;
      try {
        if (task(i)) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<std::size_t>(workers, count);
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  if (best.load() == kNone) return std::nullopt;
  return best.load();
}

/// Runs every task(i) on up to `workers` threads.
template <typename Task>
void for_all(std::size_t count, unsigned workers, Task&& task) {
  first_success(count, workers, [&](std::size_t i) {
    task(i);
    return false;
  });
}

}  // namespace incluster
