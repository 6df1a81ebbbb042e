#pragma once

#include <vector>

#include "hwsim/measure.hpp"
#include "hwsim/routing.hpp"
#include "hwsim/trajectory.hpp"

namespace hwsim {

/// Residual of the idle-time martingale M_A(t) for LISF with Poisson arrivals.
///
/// For every potential epoch theta_i the idle spell phi_i of the server it
/// lands on has, just before theta_i, conditional mean
///   sum_{k in A busy} (mu_k / sum mu) * [no queue] * (idle + 1) / lambda,
/// because under LISF the new idle server joins the back of the idle line and
/// leaves it at the (idle + 1)-th arrival. At time t a still-idle server at
/// position p of the idle line has expected residual idle time p / lambda.
/// M_A(t) = n^{-1/2} (observed - compensator + remainder).
struct MartingaleDiagnostic {
  Policy policy = Policy::LISF;
  BorelSet set_A;
  std::vector<double> grid;
  std::vector<double> residual_path;
  double terminal = 0.0;
};

/// Per-rate-atom pieces of the residual, unscaled.
struct MartingaleTerms {
  std::vector<double> atoms;  // distinct realized rates, increasing
  std::vector<double> grid;
  // [grid index][atom index]
  std::vector<std::vector<double>> observed;
  std::vector<std::vector<double>> compensator;
  std::vector<std::vector<double>> remainder;
  double scale = 1.0;  // n^{-1/2}

  /// Scaled residual at grid index j restricted to atoms in `set`, summed in
  /// increasing atom order.
  double residual(std::size_t j, const BorelSet& set) const;
};

/// Throws std::invalid_argument unless the trajectory was produced by the
/// potential-stream construction under LISF with exponential interarrivals.
MartingaleTerms lisf_martingale_terms(const Trajectory& traj, const std::vector<double>& grid);

/// Residual path on `grid` (the trajectory's sampling grid when empty).
MartingaleDiagnostic lisf_martingale_residual(const Trajectory& traj, const BorelSet& set_A,
                                              std::vector<double> grid = {});

}  // namespace hwsim
