#pragma once

#include <limits>
#include <vector>

#include "hwsim/distributions.hpp"
#include "hwsim/measure.hpp"
#include "hwsim/routing.hpp"
#include "hwsim/trajectory.hpp"

namespace hwsim {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

/// Piecewise-constant idle-server count: idle[j] holds on [times[j], times[j+1]),
/// the last value holds until `end`.
struct IdlenessPath {
  std::vector<double> times;
  std::vector<double> idle;
  double end = 0.0;
  double scale = 1.0;  // the integrated process is idle * scale
};

/// Idle count (n - X)^+ after every event, scaled by 1/sqrt(n).
IdlenessPath idleness_path(const Trajectory& traj);

/// First time the integral of the path strictly exceeds epsilon; kNever if
/// that does not happen before the path ends.
double tau_epsilon(const IdlenessPath& path, double epsilon);
double tau_epsilon(const Trajectory& traj, double epsilon);

/// Atom at each distinct realized rate with weight n^{-1/2} times the idle
/// time accrued on [0, t] by servers with that rate.
DiscreteMeasure cumulative_idleness(const Trajectory& traj, double t);

/// Normalized cumulative idleness, or `zeta` when no idleness has accrued.
DiscreteMeasure fairness_measure(const Trajectory& traj, double t, const DiscreteMeasure& zeta);

struct FairnessPath {
  std::vector<double> grid;
  std::vector<DiscreteMeasure> measures;
  double tau0 = kNever;
  DiscreteMeasure zeta;
};

FairnessPath fairness_path(const Trajectory& traj, const std::vector<double>& grid,
                           const DiscreteMeasure& zeta);

/// Replaces the measure by zeta at every grid point t <= tau_epsilon.
FairnessPath shift_epsilon(const FairnessPath& path, double epsilon, const Trajectory& traj);

/// Size-biased F: weight at mu proportional to mu * dF(mu). Uniform F is
/// discretized at `bins` midpoints.
DiscreteMeasure blind_limit_measure(const RateDistribution& dist, int bins = 256);

/// Limiting fairness measure for the policy class: delta at the slowest rate
/// for FSF, at the fastest for SSF, size-biased F for blind policies.
DiscreteMeasure predicted_limit(Policy policy, const RateDistribution& dist);

/// Placeholder zeta matching the policy's limit.
inline DiscreteMeasure default_zeta(Policy policy, const RateDistribution& dist) {
  return predicted_limit(policy, dist);
}

/// Probability measure of F itself (uniform discretized like blind_limit_measure).
DiscreteMeasure rate_measure(const RateDistribution& dist, int bins = 256);

}  // namespace hwsim
