#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ewinfo {

inline std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0)
    return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(begin, end) over [0, count) in chunks pulled by `workers` threads.
/// fn must only write state owned by its own index range.
template <typename Fn>
void parallel_chunks(std::size_t count, std::size_t workers, std::size_t chunk, Fn &&fn) {
  if (count == 0)
    return;
  chunk = std::max<std::size_t>(1, chunk);
  workers = std::min(std::max<std::size_t>(1, workers), (count + chunk - 1) / chunk);
  if (workers == 1) {
    for (std::size_t b = 0; b < count; b += chunk)
      fn(b, std::min(count, b + chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t b = next.fetch_add(chunk);
          if (b >= count)
            return;
          try {
            fn(b, std::min(count, b + chunk));
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
              error = std::current_exception();
            next.store(count);
            return;
          }
        }
      });
  }
  if (error)
    std::rethrow_exception(error);
}

} // namespace ewinfo
