#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace arconv {

namespace detail {
inline std::atomic<int>& max_threads_slot() {
  static std::atomic<int> v{0};  // 0 = use hardware_concurrency
  return v;
}
}  // namespace detail

inline void set_max_threads(int n) { detail::max_threads_slot().store(n); }

inline int max_threads() {
  int v = detail::max_threads_slot().load();
  if (v > 0) return v;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(begin, end) over a chunked partition of [0, n). Each chunk is a
// contiguous index range, so callers stay deterministic as long as chunks
// write disjoint outputs. Falls back to a plain inline call when only one
// thread is available or the range is small.
template <typename F>
void parallel_for(std::size_t n, F&& fn, std::size_t min_grain = 1) {
  if (n == 0) return;
  const int threads =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(max_threads()),
                                             std::max<std::size_t>(n / std::max<std::size_t>(min_grain, 1), 1)));
  if (threads <= 1) {
    fn(static_cast<std::size_t>(0), n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::size_t chunk = (n + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
  for (int t = 0; t < threads; ++t) {
    const std::size_t b = static_cast<std::size_t>(t) * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace arconv
