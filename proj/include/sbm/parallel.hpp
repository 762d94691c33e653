#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sbm {

/// Paths are grouped in chunks of this many; reductions walk chunks in index
/// order, so results do not depend on the number of workers.
inline constexpr std::size_t kChunkSize = 512;

/// Worker count from SBM_WORKERS, falling back to 1.
inline unsigned default_workers() {
  if (const char* env = std::getenv("SBM_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return static_cast<unsigned>(w);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Runs `work(begin, end)` on chunks of [0, n) and returns the per-chunk
/// results in chunk order. Chunks are claimed dynamically by `workers` threads.
template <class Work>
auto run_chunks(std::size_t n, unsigned workers, Work&& work) {
  using Result = decltype(work(std::size_t{}, std::size_t{}));
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Result> results(chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        results[c] = work(c * kChunkSize, std::min(n, (c + 1) * kChunkSize));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (workers == 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(loop);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Mean/variance accumulator (Chan et al. pairwise merge).
struct RunningStats {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& other) {
    if (other.n == 0.0) return;
    if (n == 0.0) {
      *this = other;
      return;
    }
    const double total = n + other.n;
    const double delta = other.mean - mean;
    mean += delta * other.n / total;
    m2 += other.m2 + delta * delta * n * other.n / total;
    n = total;
  }

  double variance() const { return n > 1.0 ? m2 / (n - 1.0) : 0.0; }
  double stderr_of_mean() const { return n > 0.0 ? std::sqrt(variance() / n) : 0.0; }
};

}  // namespace sbm
