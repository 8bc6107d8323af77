#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace specgnn {

/// Run fn(i) for i in [begin, end) on up to `threads` workers, contiguous
/// chunks per worker. Results must not depend on execution order; callers
/// needing determinism reduce worker outputs in index order afterwards. The
/// first exception thrown by any worker is rethrown on the calling thread.
inline void parallel_for(std::size_t begin, std::size_t end, std::size_t threads,
                         const std::function<void(std::size_t)>& fn) {
  const std::size_t count = end > begin ? end - begin : 0;
  if (count == 0) return;
  if (threads == 0) threads = 1;
  const std::size_t workers = std::min(threads, count);
  if (workers == 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }

  std::mutex error_mu;
  std::exception_ptr first_error;
  auto run_chunk = [&](std::size_t lo, std::size_t hi) {
    try {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t lo = begin + w * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo < hi) pool.emplace_back(run_chunk, lo, hi);
  }
  run_chunk(begin, std::min(end, begin + chunk));
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace specgnn
