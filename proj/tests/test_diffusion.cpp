#include <gtest/gtest.h>

#include <cmath>

#include "hwsim/diffusion.hpp"
#include "hwsim/stats.hpp"

using namespace hwsim;

namespace {

SdeParams ode(double xi0, double m, double dt) {
  SdeParams p;
  p.xi0 = xi0;
  p.beta = 0;
  p.m = m;
  p.gamma = 0;
  p.dt = dt;
  p.horizon = 1;
  p.zero_noise = true;
  return p;
}

}  // namespace

TEST(SampleBeta, DegenerateRatesGiveLambdaHat) {
  RngStream rng(1, 0, StreamComponent::beta);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sample_beta(-0.7, RateDistribution::point(1.5), BetaMode::unconditional, {}, rng), -0.7);
  }
  const std::vector<double> rates(50, 1.5);
  EXPECT_EQ(sample_beta(-0.7, RateDistribution::two_point(1, 0.5, 2), BetaMode::from_rates, rates, rng), -0.7);
}

TEST(SampleBeta, FromRatesFormula) {
  RngStream rng(1, 0, StreamComponent::beta);
  const std::vector<double> rates{2, 2, 2, 1};  // sum 7, n mean 6, sqrt n 2
  EXPECT_DOUBLE_EQ(sample_beta(1.0, RateDistribution::two_point(1, 0.5, 2), BetaMode::from_rates, rates, rng), 0.5);
  EXPECT_THROW(sample_beta(1.0, RateDistribution::point(1), BetaMode::from_rates, {}, rng), std::invalid_argument);
}

TEST(SampleBeta, UnconditionalMoments) {
  RngStream rng(2, 0, StreamComponent::beta);
  const auto dist = RateDistribution::two_point(1, 0.5, 2);
  std::vector<double> v(100000);
  for (auto& b : v) b = sample_beta(-1.0, dist, BetaMode::unconditional, {}, rng);
  const Summary s = summarize(v);
  EXPECT_NEAR(s.mean, -1.0, 4 * 0.5 / std::sqrt(1e5));
  EXPECT_NEAR(s.sd * s.sd, 0.25, 0.005);
}

TEST(IntegrateSde, ZeroEverythingStaysAtZero) {
  const SdePath p = integrate_sde(ode(0, 1, 0.01));
  for (double x : p.values) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(p.times.size(), 101u);
  EXPECT_EQ(p.times.back(), 1.0);
}

TEST(IntegrateSde, StartsExactlyAtXi0) {
  SdeParams p = ode(-0.37, 2, 0.01);
  p.zero_noise = false;
  EXPECT_EQ(integrate_sde(p).values.front(), -0.37);
}

TEST(IntegrateSde, ExponentialDecayOde) {
  for (double dt : {1e-2, 1e-3}) {
    EXPECT_NEAR(integrate_terminal(ode(-1, 2, dt)), -std::exp(-2.0), 2.0 * dt);
  }
  EXPECT_NEAR(integrate_terminal(ode(-1, 2, 1e-3)), -0.13534, 5e-3);
}

TEST(IntegrateSde, EulerIsFirstOrder) {
  const double dt = 0.01;
  const double ref = integrate_terminal(ode(-1, 2, dt / 8));
  const double gap1 = std::abs(integrate_terminal(ode(-1, 2, dt)) - ref);
  const double gap2 = std::abs(integrate_terminal(ode(-1, 2, dt / 2)) - ref);
  EXPECT_GE(gap1 / gap2, 1.6);
  EXPECT_LE(gap1 / gap2, 2.6);
}

TEST(IntegrateSde, OrnsteinUhlenbeckVariance) {
  SdeParams p;
  p.mu_bar = 1 / std::sqrt(2.0);  // sigma = mu_bar * sqrt(ca2 + 1) = 1
  p.ca2 = 1;
  p.m = 1;
  p.gamma = 1;
  p.beta = 0;
  p.horizon = 10;
  p.dt = 0.01;
  p.seed = RngStream(3, 0, StreamComponent::brownian);
  ASSERT_DOUBLE_EQ(p.diffusion_coefficient(), 1.0);
  const std::vector<double> betas(10000, 0.0);
  const auto xs = terminal_law(p, betas, betas.size());
  const Summary s = summarize(xs);
  EXPECT_NEAR(s.sd * s.sd, 0.5, 0.03);
}

TEST(IntegrateSde, SignDecomposition) {
  SdeParams p = ode(0.3, 1.2, 0.01);
  p.zero_noise = false;
  p.gamma = 0.5;
  p.horizon = 5;
  for (double x : integrate_sde(p).values) {
    EXPECT_EQ(positive_part(x) - negative_part(x), x);
    EXPECT_EQ(positive_part(x) * negative_part(x), 0.0);
  }
}

TEST(IntegrateSde, Validation) {
  SdeParams p = ode(0, 1, 0.02);
  EXPECT_THROW(p.validate(), ValidationError);  // dt > horizon / 100
  p.dt = 0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = ode(0, 1, 0.01);
  p.gamma = -1;
  EXPECT_THROW(p.validate(), ValidationError);
  p = ode(0, 1, 0.01);
  p.sigma = 2.5;
  EXPECT_EQ(p.diffusion_coefficient(), 2.5);
}

TEST(TerminalLaw, DeterministicDrift) {
  SdeParams p = ode(0.25, 0, 0.01);
  p.horizon = 2;
  const std::vector<double> betas(20, -0.5);
  for (double x : terminal_law(p, betas, betas.size())) EXPECT_NEAR(x, 0.25 - 0.5 * 2, 1e-12);
  EXPECT_THROW(terminal_law(p, betas, 3), std::invalid_argument);
}

TEST(TerminalLaw, IndependentRunsAgree) {
  SdeParams p;
  p.mu_bar = 1.5;
  p.ca2 = 1;
  p.m = 1.5;
  p.gamma = 0.5;
  p.beta = -1;
  p.horizon = 5;
  p.dt = 0.01;
  const std::vector<double> betas(10000, -1.0);
  p.seed = RngStream(10, 0, StreamComponent::brownian);
  const auto a = terminal_law(p, betas, betas.size());
  p.seed = RngStream(10, 1000000, StreamComponent::brownian);
  const auto b = terminal_law(p, betas, betas.size());
  EXPECT_LE(ks_distance(a, b), 0.03);
}

TEST(TerminalLaw, LinearCaseMeanWithRandomDrift) {
  SdeParams p;
  p.xi0 = 0.8;
  p.mu_bar = 1.5;
  p.ca2 = 1;
  p.m = 0.7;
  p.gamma = 0.7;
  p.horizon = 3;
  p.dt = 0.001;
  p.seed = RngStream(12, 0, StreamComponent::brownian);
  RngStream beta_rng(12, 0, StreamComponent::beta);
  const auto dist = RateDistribution::two_point(1, 0.5, 2);
  std::vector<double> betas(4000);
  for (auto& b : betas) b = sample_beta(-1.0, dist, BetaMode::unconditional, {}, beta_rng);
  const Summary s = summarize(terminal_law(p, betas, betas.size()));
  const double decay = std::exp(-p.gamma * p.horizon);
  const double expected = p.xi0 * decay + (-1.0) * (1 - decay) / p.gamma;
  EXPECT_NEAR(s.mean, expected, 3 * s.standard_error);
}
