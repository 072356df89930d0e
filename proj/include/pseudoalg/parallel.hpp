#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace pseudoalg {

/// Worker count: min(hardware, tasks), capped by PSEUDOALG_THREADS.
inline int thread_budget(int tasks) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("PSEUDOALG_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return std::max(1, std::min(hw, tasks));
}

/// Runs fn(i) for i in [0, n) over a fixed-size pool. All shared inputs are
/// immutable; fn owns synchronization of its outputs.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
  int workers = thread_budget(n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace pseudoalg
