#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace posethdx {

// Runs fn(0..count-1) on up to `jobs` threads. Iterations must write only to
// their own slots; results are then deterministic regardless of scheduling.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = std::min<int>(jobs, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace posethdx
