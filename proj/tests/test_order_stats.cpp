#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmaclab/order_stats.hpp"
#include "cmaclab/rng.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace cmaclab;

TEST_CASE("selection picks the k smallest with stable ties") {
  {
    const std::vector<double> g = {0.5, 0.2, 0.9};
    const KscgSelection s = select_k_smallest(g, 2);
    CHECK(s.indices == std::vector<int>{1, 0});
    CHECK(s.threshold == 0.5);
  }
  {
    const std::vector<double> g = {0.3, 0.3, 0.1};
    const KscgSelection s = select_k_smallest(g, 2);
    CHECK(s.indices == std::vector<int>{2, 0});
    CHECK(s.threshold == 0.3);
  }
  {
    const std::vector<double> g = {0.7, 0.1, 0.4};
    const KscgSelection s = select_k_smallest(g, 3);
    CHECK(s.indices == std::vector<int>{1, 2, 0});
    CHECK(s.threshold == 0.7);
  }
  const std::vector<double> g = {1.0, 2.0};
  CHECK_THROWS_AS(select_k_smallest(g, 0), std::invalid_argument);
  CHECK_THROWS_AS(select_k_smallest(g, 3), std::invalid_argument);
}

TEST_CASE("selection is permutation invariant and monotone in k") {
  auto rng = make_stream(99, StreamDomain::check, 0);
  std::vector<double> g(200);
  sample_vector(FadingModel::rayleigh(), rng, g);

  const KscgSelection ref = select_k_smallest(g, 20);
  std::vector<int> perm(g.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> shuffled(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) shuffled[perm[i]] = g[i];
  const KscgSelection alt = select_k_smallest(shuffled, 20);
  std::vector<int> unshuffled;
  for (int i : alt.indices) {
    const auto it = std::find(perm.begin(), perm.end(), i);
    unshuffled.push_back(static_cast<int>(it - perm.begin()));
  }
  CHECK(unshuffled == ref.indices);
  CHECK(alt.threshold == ref.threshold);

  double prev = 0.0;
  for (int k = 1; k <= 200; k += 13) {
    const double th = select_k_smallest(g, k).threshold;
    CHECK(th >= prev);
    prev = th;
  }
}

TEST_CASE("quantile of the k-th smallest follows its beta law") {
  // library beta cdf against an independent reference implementation first
  CHECK(boost::math::ibeta(5.0, 46.0, 0.05) == doctest::Approx(0.103616810144).epsilon(1e-9));
  CHECK(boost::math::ibeta(5.0, 46.0, 0.0980392) ==
        doctest::Approx(0.550498086780).epsilon(1e-6));
  CHECK(boost::math::ibeta(5.0, 46.0, 0.15) == doctest::Approx(0.887894791945).epsilon(1e-9));

  CHECK(beta_law_check(FadingModel::rayleigh(), 50, 5, 10000, 7) < 0.02);
  CHECK(beta_law_check(FadingModel::weibull(4.0), 50, 5, 10000, 7) < 0.02);
  CHECK(beta_law_check(FadingModel::rayleigh(), 1, 1, 10000, 7) < 0.02);

  // mean of the transformed order statistic is K/(N+1)
  std::vector<double> z(10000);
  std::vector<double> g(50);
  for (int t = 0; t < 10000; ++t) {
    auto rng = make_stream(7, StreamDomain::check, t);
    sample_vector(FadingModel::rayleigh(), rng, g);
    std::nth_element(g.begin(), g.begin() + 4, g.end());
    z[t] = cdf(FadingModel::rayleigh(), g[4]);
  }
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / z.size();
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= (z.size() - 1.0);
  const double sigma = std::sqrt(var / z.size());
  CHECK(std::abs(mean - 5.0 / 51.0) < 3.0 * sigma);
}

TEST_CASE("maxima concentrate in the predicted window") {
  // exact coverage from (1 - e^{-x})^N evaluated at the window edges
  const double exact_rayleigh = 0.851616;
  const double cov = concentration_check(FadingModel::rayleigh(), 10000, 0.2, 10000, 13);
  CHECK(std::abs(cov - exact_rayleigh) < 0.02);

  const double cov_w = concentration_check(FadingModel::weibull(4.0), 10000, 0.3, 10000, 13);
  CHECK(cov_w >= 0.9);
  CHECK(std::abs(cov_w - 0.938853) < 0.02);

  // nested windows make coverage monotone in eps
  const double c1 = concentration_check(FadingModel::nakagami(0.5), 2000, 0.15, 2000, 17);
  const double c2 = concentration_check(FadingModel::nakagami(0.5), 2000, 0.3, 2000, 17);
  const double c3 = concentration_check(FadingModel::nakagami(0.5), 2000, 0.6, 2000, 17);
  CHECK(c1 <= c2);
  CHECK(c2 <= c3);

  CHECK_THROWS_AS(concentration_check(FadingModel::rayleigh(), 100, 0.0, 2000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(concentration_check(FadingModel::rayleigh(), 100, 1.0, 2000, 1),
                  std::invalid_argument);
}

TEST_CASE("scaled minimum approaches the gamma-function constant") {
  // exponential minimum has closed-form mean 1/N and quantile -log(1 - 1/N)
  const double r_ray = g_min_scaling(FadingModel::rayleigh(), 100, 100000, 19);
  CHECK(r_ray == doctest::Approx(1.0).epsilon(0.05));

  const double r_na = g_min_scaling(FadingModel::nakagami(2.0), 1000, 20000, 19);
  CHECK(r_na == doctest::Approx(0.886227).epsilon(0.1));

  CHECK_THROWS_AS(g_min_scaling(FadingModel::rayleigh(), 1, 100000, 1), std::invalid_argument);
  CHECK_THROWS_AS(g_min_scaling(FadingModel::rayleigh(), 100, 500, 1), std::invalid_argument);
}

TEST_CASE("quantile inversion hits closed forms") {
  CHECK(cdf_inv(FadingModel::rayleigh(), 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-8));
  CHECK(cdf_inv(FadingModel::rayleigh(), 0.01) ==
        doctest::Approx(-std::log(0.99)).epsilon(1e-6));
  CHECK(cdf_inv(FadingModel::weibull(1.0), 0.3) ==
        doctest::Approx(0.06360850781684893).epsilon(1e-7));
  CHECK(cdf_inv(FadingModel::nakagami(2.0), 1e-3) ==
        doctest::Approx(0.022701008884744144).epsilon(1e-6));
  CHECK_THROWS_AS(cdf_inv(FadingModel::rayleigh(), 0.0), std::domain_error);
  CHECK_THROWS_AS(cdf_inv(FadingModel::rayleigh(), 1.0), std::domain_error);
}
