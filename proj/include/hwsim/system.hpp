#pragma once

#include <cstdint>
#include <vector>

#include "hwsim/distributions.hpp"
#include "hwsim/random.hpp"
#include "hwsim/routing.hpp"

namespace hwsim {

enum class Construction { potential_stream, per_server_timers };

const char* to_string(Construction c);

/// Full parameterization of one n-server system.
struct SystemConfig {
  int n = 1;
  double lambda = 1.0;  // arrival rate lambda_n; 0 disables arrivals
  InterarrivalLaw arrival_law = InterarrivalLaw::exponential();
  RateDistribution rate_dist = RateDistribution::point(1.0);
  std::vector<double> rates;  // realized rates; empty means sample at init
  double gamma = 0.0;         // abandonment rate
  std::int64_t x0 = 0;
  double horizon = 1.0;
  Policy policy = Policy::LISF;
  Construction construction = Construction::potential_stream;
  RngStream seed{1, 0};
  double grid_spacing = 0.0;  // 0 means 0.01 * horizon

  /// Throws ValidationError naming the offending key.
  void validate() const;
  double effective_grid_spacing() const;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

}  // namespace hwsim
