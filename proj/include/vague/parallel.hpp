#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vague {

/// Worker count used when a call passes 0. Defaults to the hardware
/// concurrency.
unsigned default_threads();
void set_default_threads(unsigned threads);

/// Runs fn(rep) for rep in [0, reps) on a block-partitioned pool. Each
/// replicate must write only to its own slot; results therefore do not
/// depend on the thread count. The first exception thrown is rethrown.
template <typename Fn>
void for_each_replicate(std::size_t reps, Fn&& fn, unsigned threads = 0) {
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(reps, 1)));
  if (threads <= 1) {
    for (std::size_t r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = reps * t / threads;
    const std::size_t end = reps * (t + 1) / threads;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t r = begin; r < end && !failed.load(std::memory_order_relaxed); ++r) {
          fn(r);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace vague
