#include <gtest/gtest.h>

#include <cmath>

#include "hwsim/martingale.hpp"
#include "hwsim/simulator.hpp"
#include "hwsim/stats.hpp"

using namespace hwsim;

TEST(Ks, Examples) {
  const std::vector<double> a{0.3, 1.2, 5.0};
  EXPECT_EQ(ks_distance(a, a), 0.0);
  EXPECT_EQ(ks_distance(std::vector<double>{0, 0, 0}, std::vector<double>{1, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(ks_distance(std::vector<double>{1, 2}, std::vector<double>{1, 3}), 0.5);
}

TEST(Ks, SymmetricAndInvariantUnderMonotoneMaps) {
  RngStream rng(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(30 + trial), b(45);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = 0.3 + rng.normal();
    const double d = ks_distance(a, b);
    EXPECT_EQ(d, ks_distance(b, a));
    for (auto& x : a) x = x * x * x;
    for (auto& x : b) x = x * x * x;
    EXPECT_EQ(d, ks_distance(a, b));
  }
}

TEST(ErlangA, PoissonWhenAbandonmentEqualsService) {
  const auto p = erlang_a_stationary(1, 1, 1, 1, 60);
  double fact = 1;
  for (std::size_t j = 0; j < 15; ++j) {
    if (j > 0) fact *= static_cast<double>(j);
    EXPECT_NEAR(p[j], std::exp(-1.0) / fact, 1e-13);
  }
}

TEST(ErlangA, FastAbandonmentEmptiesQueue) {
  const auto p = erlang_a_stationary(10, 5, 1, 100, 200);
  double queued = 0;
  for (std::size_t j = 11; j < p.size(); ++j) queued += p[j];
  EXPECT_LT(queued, 1e-3);
}

TEST(ErlangA, NormalizedAndDetailedBalance) {
  const int n = 50;
  const double lambda = 75 - std::sqrt(50.0), mu = 1.5, gamma = 0.5;
  const auto p = erlang_a_stationary(n, lambda, mu, gamma, 400);
  double total = 0;
  for (double x : p) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  double worst = 0;
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    const double k = static_cast<double>(j + 1);
    const double death = std::min(k, static_cast<double>(n)) * mu + std::max(k - n, 0.0) * gamma;
    worst = std::max(worst, std::abs(p[j] * lambda - p[j + 1] * death));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(ErlangA, TruncationTooShortReported) {
  EXPECT_THROW(erlang_a_stationary(50, 80, 1, 0.1, 60), std::runtime_error);
}

TEST(Summary, Examples) {
  const Summary c = summarize(std::vector<double>{2, 2, 2, 2});
  EXPECT_EQ(c.standard_error, 0.0);
  const Summary s = summarize(std::vector<double>{1, 2, 3});
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.sd, 1.0);
  EXPECT_NEAR(s.standard_error, 0.577, 1e-3);
  EXPECT_DOUBLE_EQ(summarize(std::vector<double>{4, 1, 3, 2}).median, 2.5);
}

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> v{10, 20, 30, 40, 50};
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 20);
  EXPECT_DOUBLE_EQ(quantile(v, 0.1), 14);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 50);
}

TEST(TotalVariation, PadsShorterVector) {
  EXPECT_DOUBLE_EQ(total_variation(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 0.25, 0.25}), 0.25);
}

namespace {

SystemConfig lisf_config(int n, std::uint64_t stream) {
  SystemConfig c;
  c.n = n;
  c.rate_dist = RateDistribution::two_point(1, 0.5, 2);
  c.lambda = n * 1.5 - std::sqrt(static_cast<double>(n));
  c.gamma = 0.5;
  c.x0 = n;
  c.horizon = 20;
  c.policy = Policy::LISF;
  c.seed = RngStream(41, stream);
  return c;
}

}  // namespace

TEST(Martingale, ZeroWithoutIdleEpisodes) {
  SystemConfig c = lisf_config(5, 0);
  c.lambda = 40;
  c.x0 = 40;
  c.horizon = 3;
  const Trajectory t = simulate(c);
  ASSERT_TRUE(t.idle_episodes.empty());
  for (double m : lisf_martingale_residual(t, BorelSet::nonnegative()).residual_path) EXPECT_EQ(m, 0.0);
}

TEST(Martingale, ZeroForSetMissingAllRates) {
  const Trajectory t = simulate(lisf_config(30, 1));
  const auto d = lisf_martingale_residual(t, BorelSet::half_open(1.2, 1.8));
  for (double m : d.residual_path) EXPECT_EQ(m, 0.0);
  EXPECT_EQ(d.terminal, 0.0);
}

TEST(Martingale, PartitionAdditivityIsExact) {
  for (std::uint64_t r = 0; r < 10; ++r) {
    const Trajectory t = simulate(lisf_config(50, r));
    const BorelSet a = BorelSet::singleton(2);
    const auto da = lisf_martingale_residual(t, a);
    const auto dc = lisf_martingale_residual(t, a.complement());
    const auto dall = lisf_martingale_residual(t, BorelSet::nonnegative());
    for (std::size_t j = 0; j < dall.grid.size(); ++j) {
      EXPECT_EQ(da.residual_path[j] + dc.residual_path[j], dall.residual_path[j]);
    }
  }
}

TEST(Martingale, FullSetMatchesTermTotals) {
  const Trajectory t = simulate(lisf_config(40, 3));
  const std::vector<double> grid{5, 10, 20};
  const MartingaleTerms terms = lisf_martingale_terms(t, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double total = 0;
    for (std::size_t a = 0; a < terms.atoms.size(); ++a) {
      total += terms.scale * (terms.observed[j][a] - terms.compensator[j][a] + terms.remainder[j][a]);
    }
    EXPECT_DOUBLE_EQ(terms.residual(j, BorelSet::nonnegative()), total);
  }
}

TEST(Martingale, RejectsUnsupportedTrajectories) {
  SystemConfig c = lisf_config(10, 0);
  c.policy = Policy::FSF;
  EXPECT_THROW(lisf_martingale_residual(simulate(c), BorelSet::nonnegative()), std::invalid_argument);
  c = lisf_config(10, 0);
  c.arrival_law = InterarrivalLaw::erlang(2);
  EXPECT_THROW(lisf_martingale_residual(simulate(c), BorelSet::nonnegative()), std::invalid_argument);
  c = lisf_config(10, 0);
  EXPECT_THROW(lisf_martingale_residual(simulate_per_server(c), BorelSet::nonnegative()), std::invalid_argument);
}

TEST(Martingale, MeanNearZeroOverReplications) {
  std::vector<double> terminal;
  for (std::uint64_t r = 0; r < 60; ++r) {
    terminal.push_back(lisf_martingale_residual(simulate(lisf_config(100, r)), BorelSet::singleton(2)).terminal);
  }
  const Summary s = summarize(terminal);
  EXPECT_LE(std::abs(s.mean), 3 * s.standard_error);
}
