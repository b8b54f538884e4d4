#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace mpoc {

/// Worker count: MPOC_THREADS env var, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* s = std::getenv("MPOC_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Chunked parallel loop over [0, n); body(begin, end) per chunk.
inline void parallel_for(long n, const std::function<void(long, long)>& body) {
  const unsigned nt = thread_count();
  if (nt <= 1 || n < 2) {
    body(0, n);
    return;
  }
  std::vector<std::thread> workers;
  const long chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    const long begin = t * chunk;
    const long end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(body, begin, end);
  }
  for (auto& w : workers) w.join();
}

}  // namespace mpoc
