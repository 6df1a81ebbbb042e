#pragma once

#include <span>
#include <vector>

namespace hwsim {

/// Two-sample Kolmogorov-Smirnov statistic sup |ECDF1 - ECDF2|.
double ks_distance(std::span<const double> sample1, std::span<const double> sample2);

/// Quantile by linear interpolation of order statistics (R type 7).
double quantile(std::span<const double> samples, double p);

struct Summary {
  double mean = 0.0;
  double standard_error = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

Summary summarize(std::span<const double> samples);

/// Stationary law of the Erlang-A birth-death chain truncated at `cutoff`:
/// birth lambda, death min(j, n) mu + (j - n)^+ gamma. Throws
/// std::runtime_error reporting the tail mass when the truncation drops more
/// than `tail_tolerance`.
std::vector<double> erlang_a_stationary(int n, double lambda, double mu, double gamma, int cutoff,
                                        double tail_tolerance = 1e-10);

/// Half the L1 distance between two probability vectors (shorter one padded).
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace hwsim
