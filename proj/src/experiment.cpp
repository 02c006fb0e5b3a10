#include "cmaclab/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace cmaclab {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

const std::vector<std::string> known_keys = {
    "name",    "mode",       "network",    "stsb",         "stpb",
    "p_ave_db", "q_ave_db",  "n_list",     "n",            "trials",
    "seed",    "curves",     "feedback",   "k_exponent",   "k_const",
    "param_target", "param_models", "param_values", "out",
};

struct RawConfig {
  std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)

  bool has(const std::string& k) const { return entries.count(k) != 0; }
  int line_of(const std::string& k) const {
    const auto it = entries.find(k);
    return it == entries.end() ? 0 : it->second.second;
  }
  const std::string& get(const std::string& k) const { return entries.at(k).first; }
};

RunMode parse_mode(const std::string& v, int line) {
  if (v == "estimate") return RunMode::estimate;
  if (v == "sweep") return RunMode::sweep;
  if (v == "interference_profile") return RunMode::interference_profile;
  if (v == "parameter_study") return RunMode::parameter_study;
  throw ConfigError(line, "unknown mode '" + v + "'");
}

const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::estimate: return "estimate";
    case RunMode::sweep: return "sweep";
    case RunMode::interference_profile: return "interference_profile";
    case RunMode::parameter_study: return "parameter_study";
  }
  return "?";
}

NetworkType parse_network(const std::string& v, int line) {
  if (v == "tpil") return NetworkType::tpil;
  if (v == "il") return NetworkType::il;
  if (v == "ipil") return NetworkType::ipil;
  if (v == "ipl") return NetworkType::ipl;
  throw ConfigError(line, "unknown network '" + v + "'");
}

double parse_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, "key '" + key + "' needs a number, got '" + v + "'");
  }
}

long long parse_int(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, "key '" + key + "' needs an integer, got '" + v + "'");
  }
}

// Keys each mode consumes; anything else present is a configuration mistake.
bool key_used_by_mode(const std::string& key, RunMode mode) {
  static const std::vector<std::string> common = {"name", "mode", "network", "stsb", "stpb",
                                                  "p_ave_db", "q_ave_db", "trials", "seed", "out"};
  if (std::find(common.begin(), common.end(), key) != common.end()) return true;
  const bool k_keys = key == "k_exponent" || key == "k_const";
  switch (mode) {
    case RunMode::estimate:
      return key == "n" || key == "feedback" || k_keys;
    case RunMode::sweep:
      return key == "n_list" || key == "curves" || k_keys;
    case RunMode::interference_profile:
      return key == "n_list" || key == "feedback" || k_keys;
    case RunMode::parameter_study:
      return key == "n" || key == "curves" || k_keys || key == "param_target" ||
             key == "param_models" || key == "param_values";
  }
  return false;
}

void validate(const ExperimentSpec& spec, const RawConfig& raw) {
  auto fail = [&](const std::string& key, const std::string& msg) {
    throw ConfigError(raw.line_of(key), msg);
  };
  const bool wants_kscg =
      spec.feedback == "kscg" ||
      std::find(spec.curves.begin(), spec.curves.end(), "kscg") != spec.curves.end();
  if (wants_kscg && !spec.k_exponent && !spec.k_const)
    throw ConfigError(0, "K-SCG requested but neither k_exponent nor k_const is set");
  if (spec.k_exponent && spec.k_const)
    fail("k_const", "set only one of k_exponent and k_const");

  switch (spec.mode) {
    case RunMode::estimate:
      if (spec.n < 1) fail("n", "mode estimate needs n >= 1");
      break;
    case RunMode::sweep:
      if (spec.n_list.empty()) fail("n_list", "mode sweep needs n_list");
      break;
    case RunMode::interference_profile:
      if (spec.n_list.empty()) fail("n_list", "mode interference_profile needs n_list");
      if (spec.feedback != "kscg")
        fail("feedback", "interference profiles need feedback = kscg with a vanishing schedule");
      break;
    case RunMode::parameter_study:
      if (spec.n < 1) fail("n", "mode parameter_study needs n >= 1");
      if (spec.param_target != "stsb" && spec.param_target != "stpb")
        fail("param_target", "param_target must be stsb or stpb");
      if (spec.param_models.empty()) fail("param_models", "parameter_study needs param_models");
      if (spec.param_values.empty()) fail("param_values", "parameter_study needs param_values");
      for (const std::string& m : spec.param_models) {
        if (m == "rayleigh") fail("param_models", "rayleigh has no parameter to sweep");
        if (m != "rician" && m != "nakagami" && m != "weibull")
          fail("param_models", "unknown fading kind '" + m + "' in param_models");
      }
      break;
  }
  for (const std::string& c : spec.curves) {
    if (c != "full" && c != "kscg" && c != "theory")
      fail("curves", "unknown curve '" + c + "'");
    if (c == "theory" && spec.mode != RunMode::sweep)
      fail("curves", "the theory curve only applies to sweeps");
    if (std::count(spec.curves.begin(), spec.curves.end(), c) > 1)
      fail("curves", "curve '" + c + "' listed twice");
  }
  if (spec.feedback != "full" && spec.feedback != "kscg")
    fail("feedback", "feedback must be full or kscg");
  if (spec.trials < 1000) fail("trials", "trials must be >= 1000");
}

}  // namespace

ConfigError::ConfigError(int line_no, const std::string& msg)
    : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
      line(line_no) {}

ExperimentSpec parse_spec_text(const std::string& text) {
  RawConfig raw;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end())
      throw ConfigError(line_no, "unknown key '" + key + "'");
    if (raw.has(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError(line_no, "key '" + key + "' has an empty value");
    raw.entries[key] = {value, line_no};
  }

  if (!raw.has("name")) throw ConfigError(0, "missing required key 'name'");
  if (!raw.has("mode")) throw ConfigError(0, "missing required key 'mode'");

  ExperimentSpec spec;
  spec.name = raw.get("name");
  spec.mode = parse_mode(raw.get("mode"), raw.line_of("mode"));

  for (const auto& [key, entry] : raw.entries) {
    const auto& [value, ln] = entry;
    if (!key_used_by_mode(key, spec.mode))
      throw ConfigError(ln, "key '" + key + "' is not used by mode " + mode_name(spec.mode));
    try {
      if (key == "network") spec.network = parse_network(value, ln);
      else if (key == "stsb") spec.stsb = FadingModel::parse(value);
      else if (key == "stpb") spec.stpb = FadingModel::parse(value);
      else if (key == "p_ave_db") spec.p_ave_db = parse_double(value, ln, key);
      else if (key == "q_ave_db") spec.q_ave_db = parse_double(value, ln, key);
      else if (key == "n") spec.n = static_cast<int>(parse_int(value, ln, key));
      else if (key == "trials") spec.trials = static_cast<std::size_t>(parse_int(value, ln, key));
      else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(value, ln, key));
      else if (key == "feedback") spec.feedback = value;
      else if (key == "k_exponent") spec.k_exponent = parse_double(value, ln, key);
      else if (key == "k_const") spec.k_const = static_cast<int>(parse_int(value, ln, key));
      else if (key == "param_target") spec.param_target = value;
      else if (key == "out") spec.out = value;
      else if (key == "n_list") {
        for (const std::string& tok : split_ws(value))
          spec.n_list.push_back(static_cast<int>(parse_int(tok, ln, key)));
      } else if (key == "curves") {
        spec.curves = split_ws(value);
      } else if (key == "param_models") {
        spec.param_models = split_ws(value);
      } else if (key == "param_values") {
        for (const std::string& tok : split_ws(value))
          spec.param_values.push_back(parse_double(tok, ln, key));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(ln, "key '" + key + "': " + e.what());
    }
  }

  if (spec.mode == RunMode::sweep && spec.curves.empty()) spec.curves = {"full"};
  if (spec.mode == RunMode::parameter_study && spec.curves.empty()) spec.curves = {"full"};
  validate(spec, raw);
  // constructing the schedule validates the k values' ranges
  try {
    if (spec.k_exponent) KSchedule::exponent(*spec.k_exponent);
    if (spec.k_const) KSchedule::constant(*spec.k_const);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(raw.line_of(spec.k_exponent ? "k_exponent" : "k_const"), e.what());
  }
  return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

std::string serialize_spec(const ExperimentSpec& spec) {
  std::ostringstream os;
  os << "name = " << spec.name << "\n";
  os << "mode = " << mode_name(spec.mode) << "\n";
  os << "network = " << to_string(spec.network) << "\n";
  os << "stsb = " << spec.stsb.name() << "\n";
  os << "stpb = " << spec.stpb.name() << "\n";
  os << "p_ave_db = " << fmt17(spec.p_ave_db) << "\n";
  os << "q_ave_db = " << fmt17(spec.q_ave_db) << "\n";
  if (!spec.n_list.empty()) {
    os << "n_list =";
    for (int n : spec.n_list) os << ' ' << n;
    os << "\n";
  }
  if (spec.mode == RunMode::estimate || spec.mode == RunMode::parameter_study)
    os << "n = " << spec.n << "\n";
  os << "trials = " << spec.trials << "\n";
  os << "seed = " << spec.seed << "\n";
  if (!spec.curves.empty()) {
    os << "curves =";
    for (const auto& c : spec.curves) os << ' ' << c;
    os << "\n";
  }
  if (spec.mode == RunMode::estimate || spec.mode == RunMode::interference_profile)
    os << "feedback = " << spec.feedback << "\n";
  if (spec.k_exponent) os << "k_exponent = " << fmt17(*spec.k_exponent) << "\n";
  if (spec.k_const) os << "k_const = " << *spec.k_const << "\n";
  if (!spec.param_target.empty()) os << "param_target = " << spec.param_target << "\n";
  if (!spec.param_models.empty()) {
    os << "param_models =";
    for (const auto& m : spec.param_models) os << ' ' << m;
    os << "\n";
  }
  if (!spec.param_values.empty()) {
    os << "param_values =";
    for (double v : spec.param_values) os << ' ' << fmt17(v);
    os << "\n";
  }
  if (!spec.out.empty()) os << "out = " << spec.out << "\n";
  return os.str();
}

ScenarioConfig make_scenario(const ExperimentSpec& spec, bool kscg) {
  ScenarioConfig sc;
  sc.network = spec.network;
  sc.p_ave = std::pow(10.0, spec.p_ave_db / 10.0);
  sc.q_ave = std::pow(10.0, spec.q_ave_db / 10.0);
  sc.stsb = spec.stsb;
  sc.stpb = spec.stpb;
  sc.n = spec.n;
  if (kscg) {
    if (spec.k_exponent)
      sc.feedback = KSchedule::exponent(*spec.k_exponent);
    else if (spec.k_const)
      sc.feedback = KSchedule::constant(*spec.k_const);
    else
      throw ConfigError(0, "K-SCG requested but no schedule configured");
  }
  return sc;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

const char* point_header = "N,K,sum_rate_nats,rate_hw,interference,intf_hw,lambda,mu";

void write_point_csv(const fs::path& path, const std::vector<EstimateResult>& points,
                     const std::string& first_col, const std::vector<double>* first_vals) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  if (first_vals)
    os << first_col << ",K,sum_rate_nats,rate_hw,interference,intf_hw,lambda,mu\n";
  else
    os << point_header << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const EstimateResult& p = points[i];
    if (first_vals)
      os << fmt17((*first_vals)[i]);
    else
      os << p.n;
    os << ',' << p.k << ',' << fmt17(p.sum_rate) << ',' << fmt17(p.rate_hw) << ','
       << fmt17(p.interference) << ',' << fmt17(p.intf_hw) << ',' << fmt17(p.duals.lambda) << ','
       << fmt17(p.duals.mu) << "\n";
  }
}

void write_theory_csv(const fs::path& path, const std::vector<std::pair<int, double>>& curve) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "N,theory_nats\n";
  for (const auto& [n, v] : curve) os << n << ',' << fmt17(v) << "\n";
}

FadingKind kind_from_name(const std::string& name) {
  if (name == "rician") return FadingKind::rician;
  if (name == "nakagami") return FadingKind::nakagami;
  if (name == "weibull") return FadingKind::weibull;
  return FadingKind::rayleigh;
}

}  // namespace

RunOutcome run_experiment(const ExperimentSpec& original, const RunOverrides& overrides) {
  ExperimentSpec spec = original;
  if (overrides.seed) spec.seed = *overrides.seed;
  if (overrides.trials) spec.trials = *overrides.trials;

  const fs::path out_dir = overrides.out_dir.empty() ? fs::path(".") : fs::path(overrides.out_dir);
  fs::create_directories(out_dir);
  const std::string base = spec.out.empty() ? spec.name : spec.out;

  SimOptions sim;
  sim.jobs = std::max(1, overrides.jobs);
  if (overrides.max_solver_evals) sim.max_solver_evals = *overrides.max_solver_evals;

  const std::string config_text = serialize_spec(spec);
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_text)));

  ordered_json sidecar;
  sidecar["name"] = spec.name;
  sidecar["mode"] = mode_name(spec.mode);
  sidecar["tool_version"] = tool_version;
  sidecar["seed"] = spec.seed;
  sidecar["trials"] = spec.trials;
  sidecar["config_hash"] = std::string("fnv1a64:") + hash_hex;
  sidecar["config_text"] = config_text;
  ordered_json outputs = ordered_json::array();

  RunOutcome outcome;
  auto add_file = [&](const fs::path& p) { outcome.files.push_back(p.string()); };

  switch (spec.mode) {
    case RunMode::estimate: {
      const ScenarioConfig sc = make_scenario(spec, spec.feedback == "kscg");
      const EstimateResult est = estimate(sc, spec.trials, spec.seed, sim);
      const fs::path csv = out_dir / (base + ".csv");
      write_point_csv(csv, {est}, "", nullptr);
      add_file(csv);
      ordered_json entry;
      entry["file"] = csv.filename().string();
      entry["sum_rate_nats"] = est.sum_rate;
      entry["rate_hw"] = est.rate_hw;
      outputs.push_back(entry);
      break;
    }
    case RunMode::sweep: {
      for (const std::string& curve : spec.curves) {
        const fs::path csv = out_dir / (base + "_" + curve + ".csv");
        ordered_json entry;
        entry["curve"] = curve;
        entry["file"] = csv.filename().string();
        if (curve == "theory") {
          ExperimentSpec tmp = spec;
          tmp.n = spec.n_list.front();
          const auto curve_vals = theory_curve(make_scenario(tmp, false), spec.n_list);
          write_theory_csv(csv, curve_vals);
          entry["theory_slope"] = theory_slope(make_scenario(tmp, false));
        } else {
          ExperimentSpec tmp = spec;
          tmp.n = spec.n_list.front();
          const ScenarioConfig sc = make_scenario(tmp, curve == "kscg");
          const SweepResult sweep = run_sweep(sc, spec.n_list, spec.trials, spec.seed, sim);
          write_point_csv(csv, sweep.points, "", nullptr);
          entry["regressor"] = sweep.regressor == RegressorKind::loglogN ? "loglogN" : "logN";
          entry["fitted_slope"] = sweep.fitted_slope;
          entry["fitted_intercept"] = sweep.fitted_intercept;
          entry["slope_se"] = sweep.slope_se;
          entry["theory_slope"] = sweep.theory_slope;
        }
        add_file(csv);
        outputs.push_back(entry);
      }
      break;
    }
    case RunMode::interference_profile: {
      ExperimentSpec tmp = spec;
      tmp.n = spec.n_list.front();
      const ScenarioConfig sc = make_scenario(tmp, true);
      const auto points = interference_profile(sc, spec.n_list, spec.trials, spec.seed, sim);
      const fs::path csv = out_dir / (base + ".csv");
      write_point_csv(csv, points, "", nullptr);
      add_file(csv);
      ordered_json entry;
      entry["file"] = csv.filename().string();
      entry["final_interference"] = points.back().interference;
      outputs.push_back(entry);
      break;
    }
    case RunMode::parameter_study: {
      for (const std::string& model : spec.param_models) {
        for (const std::string& curve : spec.curves) {
          const ScenarioConfig sc = make_scenario(spec, curve == "kscg");
          const auto points =
              parameter_study(sc, spec.param_target == "stsb", kind_from_name(model),
                              spec.param_values, spec.trials, spec.seed, sim);
          std::vector<EstimateResult> ests;
          std::vector<double> values;
          for (const auto& p : points) {
            ests.push_back(p.est);
            values.push_back(p.value);
          }
          const fs::path csv = out_dir / (base + "_" + model + "_" + curve + ".csv");
          write_point_csv(csv, ests, "param", &values);
          add_file(csv);
          ordered_json entry;
          entry["model"] = model;
          entry["curve"] = curve;
          entry["file"] = csv.filename().string();
          outputs.push_back(entry);
        }
      }
      break;
    }
  }

  sidecar["outputs"] = outputs;
  const fs::path json_path = out_dir / (base + ".json");
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw std::runtime_error("cannot write " + json_path.string());
  js << sidecar.dump(2) << "\n";
  add_file(json_path);
  return outcome;
}

int run_cli(const std::string& spec_path, const RunOverrides& overrides, std::ostream& out,
            std::ostream& err) {
  try {
    const ExperimentSpec spec = parse_spec_file(spec_path);
    const RunOutcome outcome = run_experiment(spec, overrides);
    for (const std::string& f : outcome.files) out << "wrote " << f << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << spec_path << ": " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cmaclab
