#include "cmaclab/experiment.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <thread>

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for cognitive uplink scheduling and power control"};
  app.require_subcommand(1);

  std::string spec_path;
  cmaclab::RunOverrides overrides;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  int max_evals = 0;
  overrides.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  CLI::App* run = app.add_subcommand("run", "execute an experiment spec");
  run->add_option("spec", spec_path, "path to the experiment spec")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the spec's seed");
  auto* trials_opt = run->add_option("--trials", trials, "override the spec's trial count");
  run->add_option("--out-dir", overrides.out_dir, "directory for artifacts (default .)");
  run->add_option("--jobs", overrides.jobs, "worker threads; results do not depend on this")
      ->envname("CMACLAB_JOBS");
  auto* evals_opt =
      run->add_option("--max-solver-evals", max_evals,
                      "diagnostic cap on constraint evaluations per dual solve");

  CLI11_PARSE(app, argc, argv);

  if (*seed_opt) overrides.seed = seed;
  if (*trials_opt) overrides.trials = trials;
  if (*evals_opt) overrides.max_solver_evals = max_evals;

  return cmaclab::run_cli(spec_path, overrides, std::cout, std::cerr);
}
