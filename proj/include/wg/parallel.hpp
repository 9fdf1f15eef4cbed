// Minimal deterministic parallel loop: work items write to disjoint slots, so
// results are bitwise independent of scheduling and thread count.
#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wg {

inline unsigned& worker_count() {
  static unsigned n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

inline void set_worker_count(unsigned n) { worker_count() = std::max(1u, n); }

template <class F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t t = std::min<std::size_t>(worker_count(), n);
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mtx;
  auto work = [&] {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
    } catch (...) {
      std::scoped_lock lock(error_mtx);
      if (!error) error = std::current_exception();
      next.store(n);  // drain remaining work
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(t - 1);
  for (std::size_t i = 0; i + 1 < t; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace wg
