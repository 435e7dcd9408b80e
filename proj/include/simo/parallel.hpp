// simo/parallel.hpp
//
// Deterministic Monte Carlo plumbing: a slot-per-task parallel loop and
// pairwise accumulation. Task i writes only to results[i]; reductions run
// sequentially over the filled array, so thread count never changes output.

#ifndef SIMO_PARALLEL_HPP
#define SIMO_PARALLEL_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace simo {

inline int available_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Runs body(i) for i in [0, n). With threads <= 1 the loop is serial;
/// otherwise workers pull indices from a shared counter. body must only
/// touch state owned by index i.
template <class Body>
void parallel_for(std::int64_t n, int threads, Body&& body) {
  if (threads <= 0) threads = available_threads();
  if (threads == 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = static_cast<int>(
      std::min<std::int64_t>(threads, n));
  pool.reserve(static_cast<size_t>(n_workers));
  for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

/// Pairwise (cascade) summation; order is fixed by the array layout.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

struct MeanEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t n = 0;
};

/// Sample mean and its standard error, both via pairwise sums.
inline MeanEstimate mc_mean(std::span<const double> samples) {
  MeanEstimate est;
  est.n = static_cast<std::int64_t>(samples.size());
  if (est.n == 0) return est;
  est.mean = pairwise_sum(samples) / static_cast<double>(est.n);
  if (est.n < 2) return est;
  std::vector<double> sq(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - est.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(est.n - 1);
  est.std_err = std::sqrt(var / static_cast<double>(est.n));
  return est;
}

}  // namespace simo

#endif  // SIMO_PARALLEL_HPP
