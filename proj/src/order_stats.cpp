#include "cmaclab/order_stats.hpp"

#include "cmaclab/parallel.hpp"
#include "cmaclab/rng.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cmaclab {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

KscgSelection select_k_smallest(std::span<const double> g, int k) {
  const int n = static_cast<int>(g.size());
  require(k >= 1 && k <= n, "K must lie in [1, N]");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const auto less = [&g](int a, int b) {
    return g[a] < g[b] || (g[a] == g[b] && a < b);
  };
  if (k < n) std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(), less);
  idx.resize(k);
  std::sort(idx.begin(), idx.end(), less);
  const double threshold = g[idx.back()];
  return {std::move(idx), threshold};
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& ref_cdf) {
  require(!samples.empty(), "KS distance needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = ref_cdf(samples[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

double cdf_inv(const FadingModel& model, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("quantile level must be in (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  while (cdf(model, hi) < prob) {
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("quantile bracket blew up");
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(model, mid) < prob)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double beta_law_check(const FadingModel& model, int n, int k, int trials, std::uint64_t seed) {
  require(n >= 1 && k >= 1 && k <= n, "K must lie in [1, N]");
  require(trials >= 1000, "need at least 1000 trials");
  std::vector<double> z(trials);
  std::vector<double> g(n);
  for (int t = 0; t < trials; ++t) {
    auto rng = make_stream(seed, StreamDomain::check, static_cast<std::uint64_t>(t));
    sample_vector(model, rng, g);
    std::nth_element(g.begin(), g.begin() + (k - 1), g.end());
    z[t] = cdf(model, g[k - 1]);
  }
  const double a = static_cast<double>(k);
  const double b = static_cast<double>(n - k + 1);
  return ks_distance(std::move(z), [a, b](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(a, b, x);
  });
}

double concentration_check(const FadingModel& model, int n, double eps, int trials,
                           std::uint64_t seed) {
  require(n >= 2, "need at least two users");
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  require(trials >= 1000, "need at least 1000 trials");
  const ClassCParams p = class_c_params(model);
  const double log_n = std::log(static_cast<double>(n));
  const double lo = tail_g_inv_log(p, (1.0 - eps) * log_n);
  const double hi = tail_g_inv_log(p, (1.0 + eps) * log_n);

  std::vector<double> gains(n);
  long hits = 0;
  for (int t = 0; t < trials; ++t) {
    auto rng = make_stream(seed, StreamDomain::check, static_cast<std::uint64_t>(t));
    sample_vector(model, rng, gains);
    const double mx = *std::max_element(gains.begin(), gains.end());
    if (mx > lo && mx <= hi) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double g_min_scaling(const FadingModel& model, int n, int trials, std::uint64_t seed) {
  require(n >= 2, "need at least two users");
  require(trials >= 10000, "need at least 10000 trials");
  std::vector<double> mins(trials);
  std::vector<double> gains(n);
  for (int t = 0; t < trials; ++t) {
    auto rng = make_stream(seed, StreamDomain::check, static_cast<std::uint64_t>(t));
    sample_vector(model, rng, gains);
    mins[t] = *std::min_element(gains.begin(), gains.end());
  }
  const double mean = pairwise_sum(mins) / static_cast<double>(trials);
  return mean / cdf_inv(model, 1.0 / static_cast<double>(n));
}

}  // namespace cmaclab
