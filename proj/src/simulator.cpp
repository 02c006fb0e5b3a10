#include "cmaclab/simulator.hpp"

#include "cmaclab/parallel.hpp"
#include "cmaclab/rng.hpp"

#include <stdexcept>

namespace cmaclab {

EstimateResult estimate_with_duals(const ScenarioConfig& scenario, DualVariables duals,
                                   std::size_t trials, std::uint64_t seed,
                                   const SimOptions& options) {
  if (trials < 1000) throw std::invalid_argument("need at least 1000 trials");
  if (scenario.n < 1) throw std::invalid_argument("population size must be >= 1");

  std::vector<double> rate(trials), intf(trials), power(trials);
  const std::size_t n = static_cast<std::size_t>(scenario.n);
  parallel_for(trials, options.jobs, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> h(n), g(n);
    for (std::size_t t = lo; t < hi; ++t) {
      auto rng = make_stream(seed, StreamDomain::trial, t);
      sample_vector(scenario.stsb, rng, h);
      sample_vector(scenario.stpb, rng, g);
      const AllocationResult a = allocate_scenario(scenario, h, g, duals);
      rate[t] = a.rate;
      intf[t] = a.interference;
      power[t] = a.power;
    }
  });

  const MeanHw r = mean_hw(rate);
  const MeanHw q = mean_hw(intf);
  const MeanHw p = mean_hw(power);
  EstimateResult out;
  out.sum_rate = r.mean;
  out.interference = q.mean;
  out.duals = duals;
  out.rate_hw = r.hw;
  out.intf_hw = q.hw;
  out.trials = trials;
  out.seed = seed;
  out.n = scenario.n;
  out.k = scenario.feedback.k_of(scenario.n);
  out.avg_power = p.mean;
  out.power_hw = p.hw;
  return out;
}

EstimateResult estimate(const ScenarioConfig& scenario, std::size_t trials, std::uint64_t seed,
                        const SimOptions& options) {
  SolveOptions solve;
  solve.batch_size = options.solver_batch;
  solve.tol = options.solver_tol;
  solve.seed = seed;
  solve.jobs = options.jobs;
  solve.max_evaluations = options.max_solver_evals;
  const DualVariables duals = solve_duals(scenario, solve);
  return estimate_with_duals(scenario, duals, trials, seed, options);
}

std::vector<EstimateResult> interference_profile(const ScenarioConfig& base,
                                                 std::span<const int> n_list, std::size_t trials,
                                                 std::uint64_t seed, const SimOptions& options) {
  if (base.feedback.is_full())
    throw std::invalid_argument("interference profiles need a K-SCG schedule with K(N) = o(N)");
  std::vector<EstimateResult> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    ScenarioConfig sc = base;
    sc.n = n;
    out.push_back(estimate(sc, trials, seed, options));
  }
  return out;
}

}  // namespace cmaclab
