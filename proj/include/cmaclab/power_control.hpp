#pragma once

#include "cmaclab/fading.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cmaclab {

struct DualVariables {
  double lambda = 0.0;  // average-power price
  double mu = 0.0;      // interference price
};

struct AllocationResult {
  std::optional<int> selected;
  double power = 0.0;         // noise-normalized transmit power
  double rate = 0.0;          // nats per channel use
  double interference = 0.0;  // g * power at the primary receiver
  double max_metric = 0.0;    // winning h/(lambda + mu g)
};

struct MetricState {
  std::vector<double> metric;  // one entry per eligible user, in eligible order
  double max_metric = 0.0;
  int argmax = -1;  // global user index
};

// Secondary network constraint regimes. ipl is the individual-power-limited
// network with no interference constraint at all (the classical MAC used as a
// reference when the interference price collapses to zero).
enum class NetworkType { tpil, il, ipil, ipl };

struct KSchedule {
  enum class Kind { all, exponent, constant };
  Kind kind = Kind::all;
  double delta = 0.0;
  int k_const = 1;

  static KSchedule full() { return {}; }
  static KSchedule exponent(double delta);
  static KSchedule constant(int k);

  bool is_full() const { return kind == Kind::all; }
  int k_of(int n) const;  // K as a function of the population size

  friend bool operator==(const KSchedule&, const KSchedule&) = default;
};

struct ScenarioConfig {
  NetworkType network = NetworkType::tpil;
  KSchedule feedback;
  double p_ave = 1.0;  // linear scale, noise-normalized
  double q_ave = 1.0;
  FadingModel stsb = FadingModel::rayleigh();  // secondary transmitter -> secondary base
  FadingModel stpb = FadingModel::rayleigh();  // secondary transmitter -> primary base
  int n = 1;

  std::string label() const;  // short tag for diagnostics, e.g. "tpil/kscg"
};

const char* to_string(NetworkType t);

MetricState compute_metrics(std::span<const double> h, std::span<const double> g,
                            DualVariables duals, std::span<const int> eligible);

// Scheduling plus water-filling for one channel realization. The winner is
// argmax of h/(lambda + mu g) over the eligible set, ties to the lowest index.
AllocationResult allocate(std::span<const double> h, std::span<const double> g,
                          DualVariables duals, std::span<const int> eligible);

// Builds the eligible set the scenario's feedback rule implies, then
// delegates to allocate. IL scenarios require lambda = 0.
AllocationResult allocate_scenario(const ScenarioConfig& scenario, std::span<const double> h,
                                   std::span<const double> g, DualVariables duals);

// Fixed lower-bound policies. Both schedule the minimum-g user; the first
// loads it so that realized interference equals q_ave on every draw, the
// second transmits at the fixed level eps * n^{min(1, 1/gamma_g)}.
AllocationResult suboptimal_il_policy(std::span<const double> h, std::span<const double> g,
                                      double q_ave);
AllocationResult suboptimal_ipil_policy(std::span<const double> h, std::span<const double> g,
                                        double eps, double gamma_g, int n,
                                        std::span<const int> eligible);

}  // namespace cmaclab
