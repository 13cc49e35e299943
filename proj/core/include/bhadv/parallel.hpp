#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace bhadv {

/// Number of worker threads to use: `requested` when positive, otherwise the
/// hardware concurrency (at least 1).
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(begin, end) over a contiguous partition of [0, total).  Chunks
/// write disjoint output slots, so results do not depend on the thread count.
inline void parallel_chunks(long long total, int threads,
                            const std::function<void(long long, long long)>& fn) {
  const int t = resolve_threads(threads);
  if (total <= 0) return;
  if (t <= 1 || total == 1) {
    fn(0, total);
    return;
  }
  const int workers = static_cast<int>(t < total ? t : total);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const long long chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long begin = w * chunk;
    const long long end = begin + chunk < total ? begin + chunk : total;
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace bhadv
