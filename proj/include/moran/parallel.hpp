#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace moran {

namespace detail {
inline std::atomic<unsigned> &default_thread_count() {
  static std::atomic<unsigned> value{0};
  return value;
}
} // namespace detail

/// Process-wide worker count used when a call passes threads == 0.
/// 0 means std::thread::hardware_concurrency().
inline void set_default_threads(unsigned threads) { detail::default_thread_count() = threads; }

inline unsigned resolve_threads(unsigned threads) {
  if (threads == 0) threads = detail::default_thread_count();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

/// Runs body(i) for i in [0, n) over contiguous blocks. Each index is handled
/// by exactly one worker, so results written per index do not depend on the
/// thread count. The exception from the lowest failing block is rethrown.
template <typename Body> void parallel_for(std::size_t n, unsigned threads, Body &&body) {
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : pool) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace moran
