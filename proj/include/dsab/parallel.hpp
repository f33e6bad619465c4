#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dsab {

inline unsigned default_jobs() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : hc;
}

// Runs fn(first, last, chunk_index) over [0, total) split into fixed-size
// chunks. The chunk layout depends only on total and chunk_size, never on
// the number of workers, so chunk-indexed results are reproducible for any
// jobs value. fn must be safe to call concurrently.
inline void parallel_chunks(
    std::size_t total, std::size_t chunk_size, unsigned jobs,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (total == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t n_chunks = (total + chunk_size - 1) / chunk_size;
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(jobs, n_chunks));

  if (workers == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      fn(c * chunk_size, std::min(total, (c + 1) * chunk_size), c);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      try {
        fn(c * chunk_size, std::min(total, (c + 1) * chunk_size), c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dsab
