#pragma once

#include "cmaclab/fading.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cmaclab {

struct KscgSelection {
  std::vector<int> indices;  // ascending gain order, ties broken toward the lower index
  double threshold;          // gain of the K-th smallest
};

// Indices of the K smallest cross gains. O(N + K log K).
KscgSelection select_k_smallest(std::span<const double> g, int k);

// One-sample Kolmogorov-Smirnov distance. Consumes the sample by value since
// it has to sort it anyway.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& ref_cdf);

// Quantile by bisection, 1e-10 absolute on the argument.
double cdf_inv(const FadingModel& model, double prob);

// F(g_(K:N)) against its Beta(K, N-K+1) law; returns the KS distance.
double beta_law_check(const FadingModel& model, int n, int k, int trials, std::uint64_t seed);

// Fraction of trials in which max of n draws lands in
// (G^{-1}(n^{1-eps}), G^{-1}(n^{1+eps})].
double concentration_check(const FadingModel& model, int n, double eps, int trials,
                           std::uint64_t seed);

// Mean minimum of n draws over F^{-1}(1/n).
double g_min_scaling(const FadingModel& model, int n, int trials, std::uint64_t seed);

}  // namespace cmaclab
