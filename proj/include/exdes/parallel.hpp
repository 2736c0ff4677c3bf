#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace exdes {

// Runs body(chunk, begin, end) over [0, n) split into at most `threads`
// contiguous chunks; chunk numbers are 0-based and stable, so callers can
// keep per-chunk partial results and merge them in order.
template <class F>
void parallel_chunks(std::size_t n, unsigned threads, F &&body) {
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (t <= 1) {
    body(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t c = 0; c < t; ++c) {
    const std::size_t lo = n * c / t, hi = n * (c + 1) / t;
    pool.emplace_back([&body, c, lo, hi] { body(c, lo, hi); });
  }
  for (auto &th : pool)
    th.join();
}

inline std::size_t chunk_count(std::size_t n, unsigned threads) {
  return std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
}

}  // namespace exdes
