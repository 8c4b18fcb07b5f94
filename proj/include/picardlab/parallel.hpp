#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace picardlab {

/// Runs fn(i) for i in [0, count) on up to `threads` workers over disjoint
/// contiguous ranges. Writers must target per-index slots; combined with
/// counter-based sampling this makes every result independent of the
/// thread count.
template <class F>
void parallel_for(std::uint64_t count, int threads, F&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::uint64_t workers =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (std::uint64_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace picardlab
