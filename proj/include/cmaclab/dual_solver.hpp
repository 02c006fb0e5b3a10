#pragma once

#include "cmaclab/power_control.hpp"
#include "cmaclab/rng.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmaclab {

// Pre-drawn channel realizations, row-major draws x n. When the feedback rule
// keeps k < n users, each draw also carries its eligible index set (ascending
// cross gain), so solver iterates never repeat the selection work.
struct ChannelBatch {
  int n = 0;
  int k = 0;
  std::size_t draws = 0;
  std::vector<double> h, g;
  std::vector<int> eligible;  // draws x k; empty when k == n

  std::span<const double> h_row(std::size_t d) const {
    return {h.data() + d * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
  std::span<const double> g_row(std::size_t d) const {
    return {g.data() + d * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
  std::span<const int> eligible_row(std::size_t d) const {
    if (eligible.empty()) return {};
    return {eligible.data() + d * static_cast<std::size_t>(k), static_cast<std::size_t>(k)};
  }
};

ChannelBatch draw_batch(const ScenarioConfig& scenario, std::size_t draws, std::uint64_t seed,
                        StreamDomain domain, int jobs = 1);

struct ConstraintEstimate {
  double avg_total_power = 0.0;
  double avg_interference = 0.0;
  double avg_individual_power = 0.0;  // avg_total_power / n under the symmetric policy
  double power_hw = 0.0;              // 95% half-widths of the two sample means
  double intf_hw = 0.0;
};

// Sample means of allocated power and interference over a fixed batch,
// through the same per-draw scheduling path the simulator uses.
ConstraintEstimate estimate_constraints(const ScenarioConfig& scenario, DualVariables duals,
                                        const ChannelBatch& batch, int jobs = 1);

struct SolveOptions {
  std::size_t batch_size = 20000;
  double tol = 0.02;  // relative slack allowed on each active constraint
  std::uint64_t seed = 1;
  int jobs = 1;
  int max_evaluations = 400;
};

struct SolveInfo {
  int evaluations = 0;
  bool lambda_active = false;
  bool mu_active = false;
  // strict slackness at multiplier zero, i.e. estimate < target - 3 half-widths
  bool lambda_strictly_slack = false;
  bool mu_strictly_slack = false;
  ConstraintEstimate final_estimate;  // on the solver's own batch
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const ScenarioConfig& scenario, double lo, double hi, const std::string& msg);
  std::string scenario_label;
  int n;
  double bracket_lo;
  double bracket_hi;
};

// Multipliers meeting each active average constraint within tol, found by
// nested bisection over a common-random-numbers batch. Constraints that are
// already met at multiplier zero come back with that multiplier exactly zero.
DualVariables solve_duals(const ScenarioConfig& scenario, const SolveOptions& options,
                          SolveInfo* info = nullptr);

}  // namespace cmaclab
