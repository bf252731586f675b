#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace so3ft {

namespace detail {
inline std::atomic<int>& thread_count_slot() {
  static std::atomic<int> count{0};  // 0 = hardware concurrency
  return count;
}
}  // namespace detail

/// Caps internal parallelism. 0 restores the default (hardware concurrency).
inline void set_thread_count(int n) { detail::thread_count_slot().store(n < 0 ? 0 : n); }

inline int thread_count() {
  int n = detail::thread_count_slot().load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [begin, end) split into contiguous per-thread chunks.
/// Each index is processed by exactly one thread, so results are independent
/// of the thread count as long as body(i) writes only to index-i outputs.
template <typename Body>
void parallel_for(std::int64_t begin, std::int64_t end, Body&& body) {
  const std::int64_t n = end - begin;
  if (n <= 0) return;
  const int threads = static_cast<int>(std::min<std::int64_t>(thread_count(), n));
  if (threads <= 1 || n == 1) {
    for (std::int64_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads - 1));
  auto run_chunk = [&body](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) body(i);
  };
  for (int t = 1; t < threads; ++t) {
    const std::int64_t lo = begin + n * t / threads;
    const std::int64_t hi = begin + n * (t + 1) / threads;
    pool.emplace_back(run_chunk, lo, hi);
  }
  run_chunk(begin, begin + n / threads);
  for (auto& th : pool) th.join();
}

}  // namespace so3ft
