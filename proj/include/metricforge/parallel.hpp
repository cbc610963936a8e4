#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace metricforge {

// Resolve a worker count: explicit request > METRICFORGE_THREADS > hardware.
inline unsigned effective_threads(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("METRICFORGE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

namespace detail {

// Cut [0,count) into at most `parts` contiguous ranges, balancing the given
// per-index weights (equal weights when the vector is empty). Returns the
// range boundaries; boundaries.size() == ranges + 1.
inline std::vector<std::size_t> balanced_bounds(std::size_t count,
                                                unsigned parts,
                                                const std::vector<double>& weights) {
  std::vector<std::size_t> bounds{0};
  if (parts <= 1 || count <= 1) {
    bounds.push_back(count);
    return bounds;
  }
  if (weights.empty()) {
    std::size_t p = std::min<std::size_t>(parts, count);
    for (std::size_t i = 1; i < p; ++i) bounds.push_back(count * i / p);
    bounds.push_back(count);
    return bounds;
  }
  double total = 0;
  for (double w : weights) total += w;
  double per = total / parts;
  double acc = 0;
  for (std::size_t i = 0; i < count; ++i) {
    acc += weights[i];
    if (acc >= per && bounds.size() < parts && i + 1 < count) {
      bounds.push_back(i + 1);
      acc = 0;
    }
  }
  bounds.push_back(count);
  return bounds;
}

}  // namespace detail

// Split [0,count) into contiguous ranges (weighted when `weights` is
// nonempty, one weight per index), run `fn(begin,end)` on each range in a
// worker thread, and fold the per-range results left to right with
// `combine`. The fold order equals the range order, so any combine that is
// associative across adjacent ranges (max, sum, logical and, first-witness)
// yields results independent of the worker count.
template <typename Result, typename RangeFn, typename CombineFn>
Result parallel_ranges(std::size_t count, unsigned threads,
                       const std::vector<double>& weights, RangeFn fn,
                       CombineFn combine) {
  unsigned t = effective_threads(threads);
  if (t <= 1 || count < 2) return fn(std::size_t{0}, count);

  auto bounds = detail::balanced_bounds(count, t, weights);
  std::size_t parts = bounds.size() - 1;
  if (parts <= 1) return fn(std::size_t{0}, count);

  std::vector<Result> results(parts);
  std::vector<std::thread> pool;
  pool.reserve(parts - 1);
  for (std::size_t i = 1; i < parts; ++i) {
    pool.emplace_back([&, i] { results[i] = fn(bounds[i], bounds[i + 1]); });
  }
  results[0] = fn(bounds[0], bounds[1]);
  for (auto& th : pool) th.join();

  Result acc = std::move(results[0]);
  for (std::size_t i = 1; i < parts; ++i) {
    acc = combine(std::move(acc), std::move(results[i]));
  }
  return acc;
}

}  // namespace metricforge
