#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hwsim/system.hpp"
#include "hwsim/trajectory.hpp"

namespace hwsim {

/// A sequence of systems under Halfin-Whitt staffing:
/// lambda_n = n * mean(F) + lambda_hat * sqrt(n).
struct LadderSpec {
  std::vector<int> n_values{25, 50, 100, 200, 400};
  double lambda_hat = 0.0;
  RateDistribution rate_dist = RateDistribution::point(1.0);
  InterarrivalLaw arrival_law = InterarrivalLaw::exponential();
  double gamma = 0.0;
  double xi0 = 0.0;
  double horizon = 20.0;
  int reps = 100;
  std::uint64_t base_seed = 1;
  Policy policy = Policy::LISF;
  Construction construction = Construction::potential_stream;
  bool freeze_rates = false;  // one rate realization per n shared by all reps
  double grid_spacing = 0.0;

  void validate() const;
  double lambda_for(int n) const;
  std::int64_t x0_for(int n) const;

  friend bool operator==(const LadderSpec&, const LadderSpec&) = default;
};

/// Stream id of replication `rep` at level `n`; shared across policies so
/// that runs at equal (n, rep) use common random numbers.
std::uint64_t replication_stream_id(int n, int rep);

/// One config per (n, rep), ordered by n then rep.
std::vector<SystemConfig> build_ladder(const LadderSpec& spec);

struct ScaledPath {
  int n = 0;
  std::vector<double> grid;
  std::vector<double> xhat;  // (X - n) / sqrt(n)
  std::vector<double> ihat;  // idle / sqrt(n)
  std::vector<double> ibar;  // idle / n
  double sup_ihat = 0.0;     // over the whole path, not just the grid
  double sup_ibar = 0.0;
  double idle_effort = 0.0;  // n^{-1} sum_k mu_k * int_0^T I_k
  double xhat_terminal = 0.0;
};

ScaledPath scale(const Trajectory& traj);

/// Grid points where ihat differs from (xhat)^- beyond rounding.
std::size_t scaled_nonidling_violations(const ScaledPath& path);

struct LadderRow {
  int n;
  std::string statistic;
  double median;
  double q25;
  double q75;
  int reps;
};

struct IdlenessScalingReport {
  std::vector<LadderRow> rows;
  /// Ratio of consecutive-level medians, keyed by (n_small, n_large).
  struct Ratio {
    int n_small;
    int n_large;
    double sup_ihat_ratio;
    double sup_ibar_ratio;
    double sup_ibar_predicted;  // sqrt(n_small / n_large)
    double idle_effort_ratio;
  };
  std::vector<Ratio> ratios;
  std::vector<std::string> warnings;

  const LadderRow* find(int n, const std::string& statistic) const;
};

IdlenessScalingReport idleness_scaling_report(const std::map<int, std::vector<ScaledPath>>& paths);

}  // namespace hwsim
