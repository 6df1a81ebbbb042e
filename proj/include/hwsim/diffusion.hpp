#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hwsim/distributions.hpp"
#include "hwsim/random.hpp"

namespace hwsim {

/// Coefficients of the limiting diffusion
///   d xi = (beta + m xi^- - gamma xi^+) dt + sigma dW,  xi(0) = xi0,
/// with sigma = diffusion_coefficient() = mu_bar * sqrt(ca2 + 1) unless overridden.
struct SdeParams {
  double xi0 = 0.0;
  double mu_bar = 1.0;
  double ca2 = 1.0;
  double beta = 0.0;
  double m = 1.0;  // mean of the limiting fairness measure
  double gamma = 0.0;
  double dt = 0.01;
  double horizon = 1.0;
  RngStream seed{1, 0, StreamComponent::brownian};
  bool zero_noise = false;  // test hook: Z = 0 at every step
  std::optional<double> sigma;  // overrides the formula when set

  double diffusion_coefficient() const;
  void validate() const;
};

struct SdePath {
  std::vector<double> times;
  std::vector<double> values;
};

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }
inline double negative_part(double x) { return x < 0.0 ? -x : 0.0; }

/// One Euler-Maruyama increment of length h with standard normal z.
double euler_step(const SdeParams& p, double xi, double z, double h);

/// Euler-Maruyama on the uniform grid of step dt (last step shortened to land
/// on the horizon).
SdePath integrate_sde(const SdeParams& params);
/// xi(horizon) without storing the path.
double integrate_terminal(const SdeParams& params);

enum class BetaMode { unconditional, from_rates };

/// Random drift lambda_hat - sigma_tilde. Unconditional draws sigma_tilde
/// from N(0, var(F)); from_rates uses (sum(rates) - n mean(F)) / sqrt(n).
double sample_beta(double lambda_hat, const RateDistribution& dist, BetaMode mode,
                   std::span<const double> rates, RngStream& stream);

/// One terminal value per beta. Path i draws its Brownian increments from
/// stream (seed, seed.stream_id + i).
std::vector<double> terminal_law(const SdeParams& tmpl, std::span<const double> betas,
                                 std::size_t n_paths);

}  // namespace hwsim
