#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace fcs {

/// Worker cap: FCS_LAB_THREADS if set to a positive integer, else the
/// hardware concurrency.
inline unsigned thread_cap() {
  if (const char* env = std::getenv("FCS_LAB_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count) on up to thread_cap() threads. Each
/// index is handled by exactly one thread, so writes to disjoint slots are
/// race-free and results are independent of scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(thread_cap(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([w, workers, count, &body] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
}

}  // namespace fcs
