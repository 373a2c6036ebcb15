#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace noveval {

// 0 means one worker per hardware thread.
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(worker, task) for every task in [0, tasks). Tasks are handed out
// dynamically, so fn must not depend on which worker runs which task. The
// first exception thrown by any task is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t tasks, unsigned workers, Fn&& fn) {
  workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_workers(workers), tasks));
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(0u, t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (;;) {
          const auto t = next.fetch_add(1, std::memory_order_relaxed);
          if (t >= tasks || failed.load(std::memory_order_relaxed)) return;
          try {
            fn(w, t);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace noveval
