#include "hwsim/diffusion.hpp"

#include <cmath>
#include <stdexcept>

namespace hwsim {

double SdeParams::diffusion_coefficient() const {
  if (sigma) return *sigma;
  return mu_bar * std::sqrt(ca2 + 1.0);
}

void SdeParams::validate() const {
  if (!(dt > 0.0)) throw ValidationError("sde.dt", "must be positive");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon", "must be finite and >= 0");
  if (horizon > 0.0 && dt > horizon / 100.0 * (1.0 + 1e-12)) {
    throw ValidationError("sde.dt", "must be <= horizon / 100");
  }
  if (!(ca2 >= 0.0)) throw ValidationError("ca2", "must be >= 0");
  if (!(diffusion_coefficient() > 0.0)) throw ValidationError("mu_bar", "diffusion coefficient must be positive");
  if (gamma < 0.0) throw ValidationError("gamma", "must be >= 0");
}

double euler_step(const SdeParams& p, double xi, double z, double h) {
  const double drift = p.beta + p.m * negative_part(xi) - p.gamma * positive_part(xi);
  return xi + drift * h + p.diffusion_coefficient() * std::sqrt(h) * z;
}

namespace {

template <typename Visit>
double run_euler(const SdeParams& params, Visit&& visit) {
  params.validate();
  RngStream stream = params.seed;
  double xi = params.xi0;
  double t = 0.0;
  visit(t, xi);
  const auto steps = static_cast<std::size_t>(std::ceil(params.horizon / params.dt - 1e-9));
  for (std::size_t j = 1; j <= steps; ++j) {
    const double next_t = j == steps ? params.horizon : static_cast<double>(j) * params.dt;
    const double h = next_t - t;
    const double z = params.zero_noise ? 0.0 : stream.normal();
    xi = euler_step(params, xi, z, h);
    t = next_t;
    visit(t, xi);
  }
  return xi;
}

}  // namespace

SdePath integrate_sde(const SdeParams& params) {
  SdePath path;
  run_euler(params, [&](double t, double xi) {
    path.times.push_back(t);
    path.values.push_back(xi);
  });
  return path;
}

double integrate_terminal(const SdeParams& params) {
  return run_euler(params, [](double, double) {});
}

double sample_beta(double lambda_hat, const RateDistribution& dist, BetaMode mode,
                   std::span<const double> rates, RngStream& stream) {
  if (mode == BetaMode::unconditional) {
    return lambda_hat - std::sqrt(dist.variance()) * stream.normal();
  }
  if (rates.empty()) throw std::invalid_argument("sample_beta: from_rates needs realized rates");
  const auto n = static_cast<double>(rates.size());
  double total = 0.0;
  for (double r : rates) total += r;
  return lambda_hat - (total - n * dist.mean()) / std::sqrt(n);
}

std::vector<double> terminal_law(const SdeParams& tmpl, std::span<const double> betas,
                                 std::size_t n_paths) {
  if (betas.size() != n_paths) throw std::invalid_argument("terminal_law: need one beta per path");
  std::vector<double> out;
  out.reserve(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    SdeParams p = tmpl;
    p.beta = betas[i];
    p.seed = RngStream(tmpl.seed.seed(), tmpl.seed.stream_id() + i, tmpl.seed.component());
    out.push_back(integrate_terminal(p));
  }
  return out;
}

}  // namespace hwsim
