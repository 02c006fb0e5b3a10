#pragma once

#include <random>
#include <span>
#include <string>

namespace cmaclab {

enum class FadingKind { rayleigh, rician, nakagami, weibull };

// Unit-mean channel power-gain law. The parameter is the K-factor for Rician,
// m for Nakagami and c for Weibull; Rayleigh has none.
class FadingModel {
 public:
  static FadingModel rayleigh() { return {FadingKind::rayleigh, 0.0}; }
  static FadingModel rician(double k_factor);
  static FadingModel nakagami(double m);
  static FadingModel weibull(double c);
  static FadingModel make(FadingKind kind, double param);

  FadingKind kind() const { return kind_; }
  double param() const { return param_; }
  std::string name() const;  // "rayleigh", "rician:2.5", ...
  static FadingModel parse(const std::string& text);

  friend bool operator==(const FadingModel&, const FadingModel&) = default;

 private:
  FadingModel(FadingKind kind, double param) : kind_(kind), param_(param) {}
  FadingKind kind_;
  double param_;
};

// Tail and origin signature of a law:
//   1 - F(x) ~ alpha x^l exp(-beta x^n + H(x))   as x -> inf
//   F(x)     ~ eta x^gamma                       as x -> 0
// H is a strictly subexponential correction, nonzero only for Rician where
// H(x) = h_coeff sqrt(x).
struct ClassCParams {
  double alpha = 1.0;
  double l = 0.0;
  double beta = 1.0;
  double n = 1.0;
  double eta = 1.0;
  double gamma = 1.0;
  double h_coeff = 0.0;

  double h_correction(double x) const;
};

ClassCParams class_c_params(const FadingModel& model);

double sample(const FadingModel& model, std::mt19937_64& rng);
// Bulk form. Distribution state is scoped to the call, so streams keyed per
// trial stay independent even when a law keeps internal caches.
void sample_vector(const FadingModel& model, std::mt19937_64& rng, std::span<double> out);

double cdf(const FadingModel& model, double x);
double moment(const FadingModel& model, double p);  // E[h^p], p > 0

// Rate function G(x) = x^{-l} exp(beta x^n - H(x)) / alpha. Increasing above
// this threshold for every catalog law with the parameter ranges we admit.
inline constexpr double tail_threshold = 1.0;

double tail_g(const ClassCParams& p, double x);
double tail_g_inv(const ClassCParams& p, double y);

// Log-scale twins. The direct form overflows for strong tails (Weibull c=4
// already near x = 30); extreme-value helpers evaluate G(x) = N^{1 +- eps}
// through these instead.
double log_tail_g(const ClassCParams& p, double x);
double tail_g_inv_log(const ClassCParams& p, double log_y);

}  // namespace cmaclab
