#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace covbal {

// Resolves a requested thread count: 0 means the COVBAL_THREADS environment
// variable if set, otherwise the hardware concurrency.
std::size_t resolve_threads(std::size_t requested);

// Splits [0, n) into contiguous chunks and calls body(begin, end) for each on
// up to `threads` workers. Callers must make body's effects independent of
// the chunking; every caller in this library writes per-index results or
// order-insensitive integer sums.
template <class Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body) {
  threads = std::max<std::size_t>(1, std::min(resolve_threads(threads), n));
  if (threads <= 1 || n < 2) {
    if (n > 0) body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace covbal
