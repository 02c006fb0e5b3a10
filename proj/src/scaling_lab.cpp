#include "cmaclab/scaling_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmaclab {

RegressorKind regressor_for(NetworkType network) {
  return network == NetworkType::tpil ? RegressorKind::loglogN : RegressorKind::logN;
}

double regressor_value(RegressorKind kind, double n) {
  return kind == RegressorKind::loglogN ? std::log(std::log(n)) : std::log(n);
}

double theory_slope(const ScenarioConfig& scenario) {
  switch (scenario.network) {
    case NetworkType::tpil:
      return 1.0 / class_c_params(scenario.stsb).n;
    case NetworkType::il:
      return 1.0 / class_c_params(scenario.stpb).gamma;
    case NetworkType::ipil:
      return std::min(1.0, 1.0 / class_c_params(scenario.stpb).gamma);
    case NetworkType::ipl:
      return 1.0;
  }
  return 0.0;
}

WlsFit wls_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
    throw std::invalid_argument("fit needs matched x/y/w with at least two points");
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double xbar = swx / sw;
  const double ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - xbar;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("degenerate regressor: all x identical");
  WlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  // With w = 1/hw^2 and hw a 95% half-width, the slope's own standard error
  // is (1/1.96)/sqrt(sum w dx^2).
  fit.slope_se = (1.0 / 1.96) / std::sqrt(sxx);
  return fit;
}

SweepResult run_sweep(const ScenarioConfig& base, std::span<const int> n_list, std::size_t trials,
                      std::uint64_t seed, const SimOptions& options) {
  if (n_list.size() < 5) throw std::invalid_argument("sweeps need at least five N values");
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw std::invalid_argument("N list must be ascending");
  if (n_list.back() < 512) throw std::invalid_argument("sweeps must reach N >= 512");

  SweepResult out;
  out.regressor = regressor_for(base.network);
  out.theory_slope = theory_slope(base);
  out.points.reserve(n_list.size());
  for (int n : n_list) {
    ScenarioConfig sc = base;
    sc.n = n;
    out.points.push_back(estimate(sc, trials, seed, options));
  }

  std::vector<double> x, y, w;
  for (const EstimateResult& p : out.points) {
    x.push_back(regressor_value(out.regressor, static_cast<double>(p.n)));
    y.push_back(p.sum_rate);
    const double hw = std::max(p.rate_hw, 1e-9);
    w.push_back(1.0 / (hw * hw));
  }
  const WlsFit fit = wls_fit(x, y, w);
  out.fitted_slope = fit.slope;
  out.fitted_intercept = fit.intercept;
  out.slope_se = fit.slope_se;
  return out;
}

std::vector<std::pair<int, double>> theory_curve(const ScenarioConfig& scenario,
                                                 std::span<const int> n_list) {
  const auto il_form = [&](double n) {
    const ClassCParams pg = class_c_params(scenario.stpb);
    const double inv_gamma = 1.0 / pg.gamma;
    const double mixed = pg.eta * moment(scenario.stsb, pg.gamma);
    return inv_gamma * std::log(n) + std::log(scenario.q_ave) + inv_gamma * std::log(mixed);
  };
  std::vector<std::pair<int, double>> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    const double nn = static_cast<double>(n);
    double v = 0.0;
    switch (scenario.network) {
      case NetworkType::tpil: {
        const ClassCParams ph = class_c_params(scenario.stsb);
        const double inv_n = 1.0 / ph.n;
        v = inv_n * std::log(std::log(nn)) + std::log(scenario.p_ave) +
            inv_n * std::log(1.0 / ph.beta);
        break;
      }
      case NetworkType::il:
        v = il_form(nn);
        break;
      case NetworkType::ipil: {
        // Below gamma_g = 1 the individual power budget dominates and the
        // curve is the population-gain line; at and above it the
        // interference constraint shapes the growth exactly as in the
        // interference-limited network.
        const double gamma_g = class_c_params(scenario.stpb).gamma;
        if (gamma_g < 1.0)
          v = std::log(nn) + std::log(scenario.p_ave);
        else
          v = il_form(nn);
        break;
      }
      case NetworkType::ipl:
        v = std::log(nn) + std::log(scenario.p_ave);
        break;
    }
    out.emplace_back(n, v);
  }
  return out;
}

std::vector<ParamStudyPoint> parameter_study(const ScenarioConfig& base, bool vary_stsb,
                                             FadingKind kind, std::span<const double> grid,
                                             std::size_t trials, std::uint64_t seed,
                                             const SimOptions& options) {
  if (grid.empty()) throw std::invalid_argument("empty parameter grid");
  std::vector<ParamStudyPoint> out;
  for (double v : grid) {
    FadingModel model = FadingModel::rayleigh();
    try {
      model = FadingModel::make(kind, v);
    } catch (const std::invalid_argument&) {
      continue;  // outside the law's admissible range, e.g. Nakagami m < 0.5
    }
    ScenarioConfig sc = base;
    (vary_stsb ? sc.stsb : sc.stpb) = model;
    ParamStudyPoint p;
    p.value = v;
    p.est = estimate(sc, trials, seed, options);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace cmaclab
