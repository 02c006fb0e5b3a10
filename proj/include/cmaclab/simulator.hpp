#pragma once

#include "cmaclab/dual_solver.hpp"
#include "cmaclab/power_control.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cmaclab {

struct SimOptions {
  int jobs = 1;
  std::size_t solver_batch = 20000;
  double solver_tol = 0.02;
  int max_solver_evals = 400;
};

struct EstimateResult {
  double sum_rate = 0.0;      // nats per channel use
  double interference = 0.0;  // mean g * power at the primary receiver
  DualVariables duals;
  double rate_hw = 0.0;  // 95% CI half-widths
  double intf_hw = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int k = 0;
  // recorded alongside the rate so constraint satisfaction can be audited
  double avg_power = 0.0;
  double power_hw = 0.0;
};

// Solves the duals on their own batch, then measures rate and interference on
// fresh trials. Deterministic in (scenario, trials, seed) for any job count.
EstimateResult estimate(const ScenarioConfig& scenario, std::size_t trials, std::uint64_t seed,
                        const SimOptions& options = {});

// Measurement half only, at caller-supplied multipliers.
EstimateResult estimate_with_duals(const ScenarioConfig& scenario, DualVariables duals,
                                   std::size_t trials, std::uint64_t seed,
                                   const SimOptions& options = {});

// Per-N estimates under a vanishing-fraction feedback schedule; the scenario
// must use a K-SCG rule with K(N) = o(N).
std::vector<EstimateResult> interference_profile(const ScenarioConfig& base,
                                                 std::span<const int> n_list, std::size_t trials,
                                                 std::uint64_t seed,
                                                 const SimOptions& options = {});

}  // namespace cmaclab
