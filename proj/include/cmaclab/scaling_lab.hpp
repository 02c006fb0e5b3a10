#pragma once

#include "cmaclab/simulator.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cmaclab {

enum class RegressorKind { loglogN, logN };

RegressorKind regressor_for(NetworkType network);
double regressor_value(RegressorKind kind, double n);

// Slope the scaling theory predicts for the scenario's regressor, derived
// from the tail/origin parameters of the fading laws and never hand-entered.
double theory_slope(const ScenarioConfig& scenario);

struct WlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // standard error implied by the weights
};

// Weighted least squares, weights = inverse variance.
WlsFit wls_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w);

struct SweepResult {
  std::vector<EstimateResult> points;
  RegressorKind regressor = RegressorKind::logN;
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
  double slope_se = 0.0;
  double theory_slope = 0.0;
};

// Estimates every N in the list and fits sum-rate against the scenario's
// regressor, weighting each point by its inverse CI variance.
SweepResult run_sweep(const ScenarioConfig& base, std::span<const int> n_list, std::size_t trials,
                      std::uint64_t seed, const SimOptions& options = {});

// Second-order reference curve for the scenario's scaling law.
std::vector<std::pair<int, double>> theory_curve(const ScenarioConfig& scenario,
                                                 std::span<const int> n_list);

struct ParamStudyPoint {
  double value = 0.0;
  EstimateResult est;
};

// Sum-rate at fixed N across a grid of fading parameters; vary_stsb picks
// which side of the link the grid applies to. Grid values outside the law's
// admissible range are skipped.
std::vector<ParamStudyPoint> parameter_study(const ScenarioConfig& base, bool vary_stsb,
                                             FadingKind kind, std::span<const double> grid,
                                             std::size_t trials, std::uint64_t seed,
                                             const SimOptions& options = {});

}  // namespace cmaclab
