#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace gpmag {

namespace detail {
inline std::atomic<int>& thread_count_storage() {
  static std::atomic<int> count{1};
  return count;
}
}  // namespace detail

/// Worker threads used by row-parallel loops. Results never depend on it:
/// reductions are formed per row and merged in row order.
inline void set_thread_count(int n) { detail::thread_count_storage() = std::max(1, n); }
inline int thread_count() { return detail::thread_count_storage(); }

/// Calls fn(row) for row in [0, rows), split into contiguous blocks.
template <typename Fn>
void parallel_rows(long rows, Fn&& fn) {
  const int workers = static_cast<int>(std::min<long>(thread_count(), rows));
  if (workers <= 1) {
    for (long r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    const long lo = rows * t / workers, hi = rows * (t + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (long r = lo; r < hi; ++r) fn(r);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace gpmag
