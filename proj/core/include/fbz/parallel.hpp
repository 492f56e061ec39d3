#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fbz {

/// Number of workers used when a caller passes 0.
inline unsigned default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Static contiguous partition of [0, n) over `workers` threads. The body is
/// called as body(begin, end) once per non-empty chunk. Results must be written
/// by index only; nothing is reduced across chunks, so output does not depend
/// on the worker count.
template <class Body>
void parallel_chunks(std::size_t n, unsigned workers, Body&& body) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    if (n > 0) body(std::size_t{0}, n);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t base = n / workers, extra = n % workers;
  std::size_t begin = 0;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t end = begin + base + (w < extra ? 1 : 0);
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
    begin = end;
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  parallel_chunks(n, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) body(i);
  });
}

}  // namespace fbz
