#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mskel {

inline int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Runs fn(begin, end) over a static partition of [0, n). Results must be
/// written to per-index slots so the partition never affects the output.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 0) threads = hardware_threads();
  if (n == 0) return;
  std::size_t want = static_cast<std::size_t>(threads);
  if (want > n) want = n;
  if (want <= 1) {
    fn(static_cast<std::size_t>(0), n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(want);
  std::exception_ptr error;
  std::mutex error_mutex;
  std::size_t chunk = (n + want - 1) / want;
  for (std::size_t t = 0; t < want; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = begin + chunk < n ? begin + chunk : n;
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace mskel
