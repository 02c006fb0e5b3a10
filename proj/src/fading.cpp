#include "cmaclab/fading.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace cmaclab {
namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// log I_0 without overflow: power series region via the stdlib, asymptotic
// expansion above it. Relative error at the switch point is below 1e-13.
double log_bessel_i0(double z) {
  if (z < 25.0) return std::log(std::cyl_bessel_i(0.0, z));
  const double r = 1.0 / z;
  const double series =
      1.0 + r * (0.125 + r * (0.0703125 + r * (0.0732421875 + r * 0.112152099609375)));
  return z - 0.5 * std::log(two_pi * z) + std::log(series);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
}

std::string format_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FadingModel FadingModel::rician(double k_factor) {
  require(k_factor >= 0.0, "Rician K-factor must be >= 0");
  return {FadingKind::rician, k_factor};
}

FadingModel FadingModel::nakagami(double m) {
  require(m >= 0.5, "Nakagami m must be >= 0.5");
  return {FadingKind::nakagami, m};
}

FadingModel FadingModel::weibull(double c) {
  require(c > 0.0, "Weibull c must be > 0");
  return {FadingKind::weibull, c};
}

FadingModel FadingModel::make(FadingKind kind, double param) {
  switch (kind) {
    case FadingKind::rayleigh: return rayleigh();
    case FadingKind::rician: return rician(param);
    case FadingKind::nakagami: return nakagami(param);
    case FadingKind::weibull: return weibull(param);
  }
  throw std::invalid_argument("unknown fading kind");
}

std::string FadingModel::name() const {
  switch (kind_) {
    case FadingKind::rayleigh: return "rayleigh";
    case FadingKind::rician: return "rician:" + format_param(param_);
    case FadingKind::nakagami: return "nakagami:" + format_param(param_);
    case FadingKind::weibull: return "weibull:" + format_param(param_);
  }
  return "?";
}

FadingModel FadingModel::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  double param = 0.0;
  if (colon != std::string::npos) {
    std::size_t used = 0;
    param = std::stod(text.substr(colon + 1), &used);
    if (colon + 1 + used != text.size())
      throw std::invalid_argument("bad fading parameter in '" + text + "'");
  }
  if (head == "rayleigh") {
    if (colon != std::string::npos) throw std::invalid_argument("rayleigh takes no parameter");
    return rayleigh();
  }
  if (colon == std::string::npos)
    throw std::invalid_argument("fading law '" + head + "' needs a parameter, e.g. '" + head + ":1'");
  if (head == "rician") return rician(param);
  if (head == "nakagami") return nakagami(param);
  if (head == "weibull") return weibull(param);
  throw std::invalid_argument("unknown fading law '" + head + "'");
}

double ClassCParams::h_correction(double x) const {
  return h_coeff == 0.0 ? 0.0 : h_coeff * std::sqrt(x);
}

ClassCParams class_c_params(const FadingModel& model) {
  ClassCParams p;
  switch (model.kind()) {
    case FadingKind::rayleigh:
      break;  // defaults are the unit exponential signature
    case FadingKind::rician: {
      const double k = model.param();
      if (k == 0.0) break;  // the K = 0 row degenerates; the law is exactly Rayleigh
      p.alpha = 1.0 / (2.0 * std::sqrt(M_PI) * std::exp(k) * std::pow(k * (k + 1.0), 0.25));
      p.l = -0.25;
      p.beta = k + 1.0;
      p.n = 1.0;
      p.eta = (k + 1.0) * std::exp(-k);
      p.gamma = 1.0;
      p.h_coeff = 2.0 * std::sqrt(k * (k + 1.0));
      break;
    }
    case FadingKind::nakagami: {
      const double m = model.param();
      p.alpha = p.eta = std::exp((m - 1.0) * std::log(m) - std::lgamma(m));
      p.l = m - 1.0;
      p.beta = m;
      p.n = 1.0;
      p.gamma = m;
      break;
    }
    case FadingKind::weibull: {
      const double c = model.param();
      p.beta = p.eta = std::exp(0.5 * c * std::lgamma(1.0 + 2.0 / c));
      p.n = p.gamma = 0.5 * c;
      break;
    }
  }
  return p;
}

void sample_vector(const FadingModel& model, std::mt19937_64& rng, std::span<double> out) {
  switch (model.kind()) {
    case FadingKind::rayleigh:
      for (double& x : out) x = -std::log(uniform01(rng));
      return;
    case FadingKind::nakagami: {
      const double m = model.param();
      std::gamma_distribution<double> gd(m, 1.0 / m);
      for (double& x : out) x = gd(rng);
      return;
    }
    case FadingKind::weibull: {
      const double c = model.param();
      const double log_beta = 0.5 * c * std::lgamma(1.0 + 2.0 / c);
      for (double& x : out) {
        const double e = -std::log(uniform01(rng));
        x = std::exp((2.0 / c) * (std::log(e) - log_beta));
      }
      return;
    }
    case FadingKind::rician: {
      const double k = model.param();
      const double los = std::sqrt(k / (k + 1.0));
      const double s = std::sqrt(0.5 / (k + 1.0));
      std::normal_distribution<double> nd;
      for (double& x : out) {
        const double a = los + s * nd(rng);
        const double b = s * nd(rng);
        x = a * a + b * b;
      }
      return;
    }
  }
}

double sample(const FadingModel& model, std::mt19937_64& rng) {
  double x;
  sample_vector(model, rng, {&x, 1});
  return x;
}

double cdf(const FadingModel& model, double x) {
  if (!(x > 0.0)) return 0.0;
  switch (model.kind()) {
    case FadingKind::rayleigh:
      return -std::expm1(-x);
    case FadingKind::nakagami: {
      const double m = model.param();
      return boost::math::gamma_p(m, m * x);
    }
    case FadingKind::weibull: {
      const double c = model.param();
      const double log_beta = 0.5 * c * std::lgamma(1.0 + 2.0 / c);
      return -std::expm1(-std::exp(log_beta + 0.5 * c * std::log(x)));
    }
    case FadingKind::rician: {
      const double k = model.param();
      if (k == 0.0) return -std::expm1(-x);
      boost::math::non_central_chi_squared_distribution<double> law(2.0, 2.0 * k);
      return boost::math::cdf(law, 2.0 * (k + 1.0) * x);
    }
  }
  return 0.0;
}

double moment(const FadingModel& model, double p) {
  require(p > 0.0, "moment order must be positive");
  switch (model.kind()) {
    case FadingKind::rayleigh:
      return std::tgamma(1.0 + p);
    case FadingKind::nakagami: {
      const double m = model.param();
      return std::exp(std::lgamma(m + p) - std::lgamma(m) - p * std::log(m));
    }
    case FadingKind::weibull: {
      const double c = model.param();
      return std::exp(std::lgamma(1.0 + 2.0 * p / c) - p * std::lgamma(1.0 + 2.0 / c));
    }
    case FadingKind::rician: {
      const double k = model.param();
      if (k == 0.0) return std::tgamma(1.0 + p);
      auto integrand = [k, p](double x) {
        if (x <= 0.0) return 0.0;
        const double log_pdf =
            std::log(k + 1.0) - k - (k + 1.0) * x + log_bessel_i0(2.0 * std::sqrt(k * (k + 1.0) * x));
        return std::exp(p * std::log(x) + log_pdf);
      };
      return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          integrand, 0.0, std::numeric_limits<double>::infinity(), 12, 1e-9);
    }
  }
  return 0.0;
}

double log_tail_g(const ClassCParams& p, double x) {
  if (!(x >= tail_threshold))
    throw std::domain_error("tail rate function evaluated below its threshold");
  return -p.l * std::log(x) + p.beta * std::pow(x, p.n) - p.h_correction(x) - std::log(p.alpha);
}

double tail_g(const ClassCParams& p, double x) { return std::exp(log_tail_g(p, x)); }

double tail_g_inv_log(const ClassCParams& p, double log_y) {
  const double at_threshold = log_tail_g(p, tail_threshold);
  if (log_y < at_threshold)
    throw std::domain_error("tail rate inverse argument below the invertibility threshold");
  if (log_y == at_threshold) return tail_threshold;

  double lo = tail_threshold;
  double hi = 2.0 * tail_threshold;
  while (log_tail_g(p, hi) < log_y) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("tail rate inverse failed to bracket");
  }
  auto f = [&](double z) { return log_tail_g(p, z) - log_y; };
  boost::math::tools::eps_tolerance<double> tol(44);
  std::uintmax_t iterations = 128;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iterations);
  return 0.5 * (r.first + r.second);
}

double tail_g_inv(const ClassCParams& p, double y) {
  if (!(y > 0.0) || !std::isfinite(y))
    throw std::domain_error("tail rate inverse argument must be positive and finite");
  return tail_g_inv_log(p, std::log(y));
}

}  // namespace cmaclab
