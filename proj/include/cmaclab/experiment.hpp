#pragma once

#include "cmaclab/scaling_lab.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmaclab {

inline constexpr const char* tool_version = "1.0.0";

enum class RunMode { estimate, sweep, interference_profile, parameter_study };

// A parsed experiment description. Mirrors the flat key=value config format
// one field per key; parse -> serialize -> parse is the identity.
struct ExperimentSpec {
  std::string name;
  RunMode mode = RunMode::estimate;
  NetworkType network = NetworkType::tpil;
  FadingModel stsb = FadingModel::rayleigh();
  FadingModel stpb = FadingModel::rayleigh();
  double p_ave_db = 15.0;
  double q_ave_db = 0.0;
  std::vector<int> n_list;                // sweep / interference_profile
  int n = 0;                              // estimate / parameter_study
  std::size_t trials = 20000;
  std::uint64_t seed = 1;
  std::vector<std::string> curves;        // sweep / parameter_study: full kscg theory
  std::string feedback = "full";          // estimate / interference_profile
  std::optional<double> k_exponent;       // K = ceil(N^delta)
  std::optional<int> k_const;
  std::string param_target;               // parameter_study: stsb | stpb
  std::vector<std::string> param_models;  // fading kinds whose parameter the grid sweeps
  std::vector<double> param_values;
  std::string out;                        // artifact basename; defaults to name

  bool operator==(const ExperimentSpec&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg);
  int line;  // 0 when the problem is not tied to a single line
};

ExperimentSpec parse_spec_text(const std::string& text);
ExperimentSpec parse_spec_file(const std::string& path);
std::string serialize_spec(const ExperimentSpec& spec);

// Scenario implied by the spec; kscg selects the K-SCG feedback rule where a
// spec carries both a full and a restricted curve.
ScenarioConfig make_scenario(const ExperimentSpec& spec, bool kscg);

std::uint64_t fnv1a64(const std::string& text);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out_dir = ".";
  int jobs = 1;
  std::optional<int> max_solver_evals;  // diagnostics: force early SolverError
};

struct RunOutcome {
  std::vector<std::string> files;  // artifact paths, CSVs first, sidecar last
};

RunOutcome run_experiment(const ExperimentSpec& spec, const RunOverrides& overrides = {});

// Full CLI behavior behind the executable: parse, run, map failures to the
// documented exit codes (2 config, 3 solver non-convergence, 1 other).
int run_cli(const std::string& spec_path, const RunOverrides& overrides, std::ostream& out,
            std::ostream& err);

}  // namespace cmaclab
