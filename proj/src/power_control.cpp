#include "cmaclab/power_control.hpp"

#include "cmaclab/order_stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cmaclab {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_duals(DualVariables d) {
  require(d.lambda >= 0.0 && d.mu >= 0.0, "dual variables must be nonnegative");
  require(d.lambda > 0.0 || d.mu > 0.0, "lambda = mu = 0 leaves the water level unbounded");
}

}  // namespace

KSchedule KSchedule::exponent(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("feedback exponent must lie in (0, 1)");
  KSchedule s;
  s.kind = Kind::exponent;
  s.delta = delta;
  return s;
}

KSchedule KSchedule::constant(int k) {
  if (k < 1) throw std::invalid_argument("constant feedback count must be >= 1");
  KSchedule s;
  s.kind = Kind::constant;
  s.k_const = k;
  return s;
}

int KSchedule::k_of(int n) const {
  switch (kind) {
    case Kind::all:
      return n;
    case Kind::constant:
      return std::min(k_const, n);
    case Kind::exponent: {
      // ceil(n^delta), snapping values a rounding error away from an integer
      // so that e.g. 1024^0.8 maps to 256 on every libm.
      const double t = std::pow(static_cast<double>(n), delta);
      const double r = std::round(t);
      const int k = (std::abs(t - r) < 1e-9 * std::max(1.0, r)) ? static_cast<int>(r)
                                                                : static_cast<int>(std::ceil(t));
      return std::min(std::max(k, 1), n);
    }
  }
  return n;
}

const char* to_string(NetworkType t) {
  switch (t) {
    case NetworkType::tpil: return "tpil";
    case NetworkType::il: return "il";
    case NetworkType::ipil: return "ipil";
    case NetworkType::ipl: return "ipl";
  }
  return "?";
}

std::string ScenarioConfig::label() const {
  std::string s = to_string(network);
  s += feedback.is_full() ? "/full" : "/kscg";
  return s;
}

MetricState compute_metrics(std::span<const double> h, std::span<const double> g,
                            DualVariables duals, std::span<const int> eligible) {
  check_duals(duals);
  require(!eligible.empty(), "eligible set is empty");
  MetricState st;
  st.metric.reserve(eligible.size());
  st.max_metric = -std::numeric_limits<double>::infinity();
  for (int i : eligible) {
    const double m = h[i] / (duals.lambda + duals.mu * g[i]);
    st.metric.push_back(m);
    if (m > st.max_metric || (m == st.max_metric && i < st.argmax)) {
      st.max_metric = m;
      st.argmax = i;
    }
  }
  return st;
}

AllocationResult allocate(std::span<const double> h, std::span<const double> g,
                          DualVariables duals, std::span<const int> eligible) {
  check_duals(duals);
  require(!eligible.empty(), "eligible set is empty");
  int best = -1;
  double best_metric = -std::numeric_limits<double>::infinity();
  for (int i : eligible) {
    const double m = h[i] / (duals.lambda + duals.mu * g[i]);
    if (m > best_metric || (m == best_metric && i < best)) {
      best_metric = m;
      best = i;
    }
  }
  AllocationResult out;
  out.selected = best;
  out.max_metric = best_metric;
  const double w = duals.lambda + duals.mu * g[best];
  if (h[best] > w) {
    // Keep the positive part as (h - w)/w rather than 1/w - 1/h: near the
    // clamp the reciprocal difference cancels but this form stays accurate,
    // and log1p of it is exactly log of the winning metric.
    const double q = (h[best] - w) / w;
    out.power = q / h[best];
    out.rate = std::log1p(q);
    out.interference = g[best] * out.power;
  }
  return out;
}

AllocationResult allocate_scenario(const ScenarioConfig& scenario, std::span<const double> h,
                                   std::span<const double> g, DualVariables duals) {
  if (scenario.network == NetworkType::il && duals.lambda != 0.0)
    throw std::invalid_argument("interference-limited scheduling requires lambda = 0");
  if (scenario.network == NetworkType::ipl && duals.mu != 0.0)
    throw std::invalid_argument("the unconstrained-interference network requires mu = 0");
  const int n = static_cast<int>(h.size());
  const int k = scenario.feedback.k_of(n);
  if (k >= n) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return allocate(h, g, duals, all);
  }
  const KscgSelection sel = select_k_smallest(g, k);
  return allocate(h, g, duals, sel.indices);
}

AllocationResult suboptimal_il_policy(std::span<const double> h, std::span<const double> g,
                                      double q_ave) {
  require(q_ave > 0.0, "q_ave must be positive");
  require(!g.empty(), "empty draw");
  int best = 0;
  for (int i = 1; i < static_cast<int>(g.size()); ++i)
    if (g[i] < g[best]) best = i;
  AllocationResult out;
  out.selected = best;
  out.power = q_ave / g[best];
  out.rate = std::log1p(h[best] * out.power);
  out.interference = q_ave;  // exact by construction
  return out;
}

AllocationResult suboptimal_ipil_policy(std::span<const double> h, std::span<const double> g,
                                        double eps, double gamma_g, int n,
                                        std::span<const int> eligible) {
  require(eps > 0.0, "eps must be positive");
  require(gamma_g > 0.0, "gamma_g must be positive");
  require(!eligible.empty(), "eligible set is empty");
  int best = eligible[0];
  for (int i : eligible)
    if (g[i] < g[best] || (g[i] == g[best] && i < best)) best = i;
  AllocationResult out;
  out.selected = best;
  out.power = eps * std::pow(static_cast<double>(n), std::min(1.0, 1.0 / gamma_g));
  out.rate = std::log1p(h[best] * out.power);
  out.interference = g[best] * out.power;
  return out;
}

}  // namespace cmaclab
