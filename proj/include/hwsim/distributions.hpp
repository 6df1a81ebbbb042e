#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hwsim/random.hpp"

namespace hwsim {

/// Thrown for invalid model parameters; the CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key, const std::string& reason)
      : std::runtime_error(key.empty() ? reason : key + ": " + reason),
        key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Renewal interarrival law normalized to mean 1. The n-th system scales
/// samples by 1/lambda_n.
class InterarrivalLaw {
 public:
  enum class Kind { exponential, erlang, hyperexponential, deterministic };

  static InterarrivalLaw exponential();
  static InterarrivalLaw erlang(int k);
  /// Mixture p*Exp(r1) + (1-p)*Exp(r2); requires p/r1 + (1-p)/r2 = 1.
  static InterarrivalLaw hyperexponential(double p, double r1, double r2);
  static InterarrivalLaw deterministic();

  Kind kind() const { return kind_; }
  int erlang_k() const { return k_; }
  double p() const { return p_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }

  double mean() const { return 1.0; }
  /// Squared coefficient of variation.
  double ca2() const;

  double sample(RngStream& stream) const;

  friend bool operator==(const InterarrivalLaw&, const InterarrivalLaw&) = default;

 private:
  Kind kind_ = Kind::exponential;
  int k_ = 1;
  double p_ = 1.0;
  double r1_ = 1.0;
  double r2_ = 1.0;
};

const char* to_string(InterarrivalLaw::Kind kind);

/// Service-rate distribution F with bounded support in (0, inf).
class RateDistribution {
 public:
  enum class Kind { point, two_point, uniform, discrete };

  static RateDistribution point(double mu);
  /// mu1 with probability p1, otherwise mu2.
  static RateDistribution two_point(double mu1, double p1, double mu2);
  static RateDistribution uniform(double a, double b);
  static RateDistribution discrete(std::vector<std::pair<double, double>> atoms);

  Kind kind() const { return kind_; }
  /// Support atoms (location, probability) sorted by location; empty for uniform.
  const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
  double uniform_low() const { return a_; }
  double uniform_high() const { return b_; }

  double support_min() const;
  double support_max() const;
  double mean() const;
  double second_moment() const;
  double variance() const { return second_moment() - mean() * mean(); }

  bool in_support(double mu) const;

  double sample(RngStream& stream) const;
  std::vector<double> sample_n(RngStream& stream, std::size_t n) const;

  friend bool operator==(const RateDistribution&, const RateDistribution&) = default;

 private:
  Kind kind_ = Kind::point;
  std::vector<std::pair<double, double>> atoms_;  // for point/two_point/discrete
  double a_ = 0.0;
  double b_ = 0.0;
};

const char* to_string(RateDistribution::Kind kind);

/// Free-function forms of the sampling primitives.
inline double sample_interarrival(RngStream& stream, const InterarrivalLaw& law) {
  return law.sample(stream);
}
inline std::vector<double> sample_rates(RngStream& stream, const RateDistribution& dist,
                                        std::size_t n) {
  return dist.sample_n(stream, n);
}
inline double sample_exponential(RngStream& stream, double rate) {
  return stream.exponential(rate);
}

}  // namespace hwsim
