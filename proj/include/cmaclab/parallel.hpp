#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace cmaclab {

// Chunked parallel loop over [0, count). The chunk layout depends only on
// (count, jobs); with per-index work that is itself deterministic the filled
// arrays never depend on scheduling order. jobs <= 1 runs inline.
inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t, std::size_t)>& run_range) {
  if (count == 0) return;
  if (jobs <= 1 || count < 2) {
    run_range(0, count);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    if (begin >= count) break;
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back(run_range, begin, end);
  }
  for (auto& t : pool) t.join();
}

// Fixed-order pairwise summation. The reduction tree depends only on the
// length, so totals are bit-identical for any worker count.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct MeanHw {
  double mean = 0.0;
  double hw = 0.0;  // 95% normal-approximation half-width
};

inline MeanHw mean_hw(std::span<const double> v) {
  MeanHw out;
  if (v.empty()) return out;
  const double n = static_cast<double>(v.size());
  out.mean = pairwise_sum(v) / n;
  if (v.size() < 2) return out;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - out.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / (n - 1.0);
  out.hw = 1.96 * std::sqrt(var / n);
  return out;
}

}  // namespace cmaclab
