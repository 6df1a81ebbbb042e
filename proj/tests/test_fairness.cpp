#include <gtest/gtest.h>

#include <cmath>

#include "hwsim/fairness.hpp"
#include "hwsim/simulator.hpp"

using namespace hwsim;

namespace {

/// Trajectory with hand-written idle episodes; only the fields the fairness
/// functions read are filled in.
Trajectory with_episodes(std::vector<double> rates, std::vector<IdleEpisode> episodes, double horizon) {
  Trajectory t;
  t.config.n = static_cast<int>(rates.size());
  t.config.lambda = 0;
  t.config.rate_dist = RateDistribution::uniform(0.5, 3);
  t.config.rates = std::move(rates);
  t.config.x0 = t.config.n;
  t.config.horizon = horizon;
  t.idle_episodes = std::move(episodes);
  return t;
}

IdlenessPath constant_path(std::vector<double> times, std::vector<double> idle, double end) {
  IdlenessPath p;
  p.times = std::move(times);
  p.idle = std::move(idle);
  p.end = end;
  p.scale = 1.0;
  return p;
}

Trajectory simulated(Policy policy, std::uint64_t stream) {
  SystemConfig c;
  c.n = 50;
  c.rate_dist = RateDistribution::two_point(1, 0.5, 2);
  c.lambda = 75 - std::sqrt(50.0);
  c.gamma = 0.5;
  c.x0 = 50;
  c.horizon = 10;
  c.policy = policy;
  c.seed = RngStream(31, stream);
  return simulate(c);
}

}  // namespace

TEST(CumulativeIdleness, ZeroAtTimeZero) {
  const Trajectory t = with_episodes({1, 2}, {{0, 1, 0, 3, true, true}}, 3);
  EXPECT_EQ(cumulative_idleness(t, 0).total(), 0.0);
}

TEST(CumulativeIdleness, SingleServer) {
  const Trajectory t = with_episodes({1.5}, {{0, 1.5, 0, 2, true, true}}, 2);
  EXPECT_EQ(cumulative_idleness(t, 2), DiscreteMeasure({{1.5, 2.0}}));
}

TEST(CumulativeIdleness, FourServersHandSum) {
  const Trajectory t = with_episodes({1, 1, 2, 2},
                                     {{0, 1, 0, 3, false, false}, {1, 1, 0.5, 1.5, false, false},
                                      {3, 2, 2, 3, false, false}},
                                     3);
  const DiscreteMeasure c = cumulative_idleness(t, 3);
  ASSERT_EQ(c.atoms().size(), 2u);
  EXPECT_DOUBLE_EQ(c.weight_at(1), 2.0);
  EXPECT_DOUBLE_EQ(c.weight_at(2), 0.5);
}

TEST(CumulativeIdleness, NondecreasingAlongGrid) {
  const Trajectory t = simulated(Policy::LISF, 1);
  const std::vector<BorelSet> sets{BorelSet::singleton(1), BorelSet::singleton(2), BorelSet::nonnegative()};
  for (const BorelSet& a : sets) {
    double prev = 0;
    for (const auto& g : t.grid) {
      const double m = cumulative_idleness(t, g.time).mass(a);
      EXPECT_GE(m, prev - 1e-12);
      prev = m;
    }
  }
}

TEST(FairnessMeasure, NeverIdleReturnsZeta) {
  const Trajectory t = with_episodes({1, 2}, {}, 3);
  const DiscreteMeasure zeta({{1, 0.4}, {2, 0.6}});
  EXPECT_EQ(fairness_measure(t, 3, zeta), zeta);
}

TEST(FairnessMeasure, SingleEpisodeIsDirac) {
  const Trajectory t = with_episodes({1, 1.5}, {{1, 1.5, 0.5, 0.7, false, false}}, 3);
  EXPECT_EQ(fairness_measure(t, 3, DiscreteMeasure::dirac(1)), DiscreteMeasure::dirac(1.5));
}

TEST(FairnessMeasure, RatioOfIdleTimes) {
  const Trajectory t = with_episodes({1, 2}, {{0, 1, 0, 3, false, false}, {1, 2, 1, 2, false, false}}, 3);
  const DiscreteMeasure m = fairness_measure(t, 3, DiscreteMeasure::dirac(1));
  EXPECT_DOUBLE_EQ(m.weight_at(1), 0.75);
  EXPECT_DOUBLE_EQ(m.weight_at(2), 0.25);
}

TEST(FairnessMeasure, MeanMatchesRawEpisodes) {
  for (Policy p : {Policy::FSF, Policy::LISF, Policy::RANDOM_IDLE}) {
    const Trajectory t = simulated(p, 2);
    double num = 0, den = 0;
    for (const auto& ep : t.idle_episodes) {
      num += ep.rate * ep.length();
      den += ep.length();
    }
    ASSERT_GT(den, 0);
    const double m = mean_of_measure(fairness_measure(t, t.config.horizon, DiscreteMeasure::dirac(1)));
    EXPECT_NEAR(m, num / den, 1e-9 * num / den);
  }
}

TEST(FairnessMeasure, RejectsNonProbabilityZeta) {
  const Trajectory t = with_episodes({1, 2}, {}, 3);
  EXPECT_THROW(fairness_measure(t, 3, DiscreteMeasure({{1, 0.5}})), std::invalid_argument);
}

TEST(FairnessPath, ZetaUntilFirstIdlenessThenProbability) {
  SystemConfig c;
  c.n = 20;
  c.rate_dist = RateDistribution::two_point(1, 0.5, 2);
  c.lambda = 30 - 2 * std::sqrt(20.0);
  c.gamma = 0.5;
  c.x0 = 22;
  c.horizon = 10;
  c.seed = RngStream(4, 4);
  const Trajectory t = simulate(c);
  const DiscreteMeasure zeta = default_zeta(Policy::LISF, c.rate_dist);
  const FairnessPath path = fairness_path(t, sampling_grid(10, 0.1), zeta);
  ASSERT_LT(path.tau0, 10.0);
  ASSERT_GT(path.tau0, 0.0);
  for (std::size_t j = 0; j < path.grid.size(); ++j) {
    if (path.grid[j] <= path.tau0) {
      EXPECT_EQ(path.measures[j], zeta);
    } else {
      EXPECT_TRUE(path.measures[j].is_probability());
    }
  }
}

TEST(TauEpsilon, NeverIdle) {
  const IdlenessPath p = constant_path({0}, {0}, 10);
  EXPECT_EQ(tau_epsilon(p, 0), kNever);
  EXPECT_EQ(tau_epsilon(p, 1), kNever);
}

TEST(TauEpsilon, ConstantLevel) {
  const IdlenessPath p = constant_path({0}, {4}, 10);
  EXPECT_DOUBLE_EQ(tau_epsilon(p, 2), 0.5);
  EXPECT_DOUBLE_EQ(tau_epsilon(p, 0), 0.0);
}

TEST(TauEpsilon, PiecewiseInversion) {
  const IdlenessPath p = constant_path({0, 1}, {0, 2}, 100);
  EXPECT_DOUBLE_EQ(tau_epsilon(p, 3), 2.5);
  EXPECT_DOUBLE_EQ(tau_epsilon(p, 0), 1.0);
}

TEST(TauEpsilon, ScaledByRootN) {
  SystemConfig c;
  c.n = 4;
  c.lambda = 0;
  c.rate_dist = RateDistribution::point(1);
  c.x0 = 3;  // one idle server from time 0, scaled level 1/2
  c.horizon = 0.01;
  const Trajectory t = simulate(c);
  EXPECT_DOUBLE_EQ(tau_epsilon(t, 0.001), 0.002);
}

TEST(ShiftEpsilon, ZeroLeavesPathUnchanged) {
  const Trajectory t = simulated(Policy::LISF, 5);
  const FairnessPath path = fairness_path(t, sampling_grid(10, 0.1), default_zeta(Policy::LISF, t.config.rate_dist));
  EXPECT_EQ(shift_epsilon(path, 0, t).measures, path.measures);
}

TEST(ShiftEpsilon, LargeEpsilonGivesConstantZeta) {
  const Trajectory t = simulated(Policy::LISF, 6);
  const DiscreteMeasure zeta = default_zeta(Policy::LISF, t.config.rate_dist);
  const FairnessPath path = fairness_path(t, sampling_grid(10, 0.1), zeta);
  const IdlenessPath ip = idleness_path(t);
  double total = 0;
  for (std::size_t j = 0; j < ip.times.size(); ++j) {
    const double stop = j + 1 < ip.times.size() ? ip.times[j + 1] : ip.end;
    total += ip.idle[j] * ip.scale * (stop - ip.times[j]);
  }
  for (const auto& m : shift_epsilon(path, total + 1e-9, t).measures) EXPECT_EQ(m, zeta);
}

TEST(ShiftEpsilon, ThreeSegmentHandComputation) {
  // n = 4 (scale 1/2). Idle count 2 on [0, 1), 0 on [1, 3), 4 from 3 on.
  // Integral: 1 at t = 1, still 1 at t = 3, then slope 2. eps = 1.5 -> tau = 3.25.
  Trajectory t;
  t.config.n = 4;
  t.config.lambda = 1;
  t.config.rate_dist = RateDistribution::two_point(1, 0.5, 2);
  t.config.rates = {1, 1, 2, 2};
  t.config.x0 = 2;
  t.config.horizon = 5;
  t.events = {
      {1.0, EventKind::arrival, -1, 3}, {1.0, EventKind::routing, 2, 3},
      {1.0, EventKind::arrival, -1, 4}, {1.0, EventKind::routing, 3, 4},
      {3.0, EventKind::completion, 0, 3}, {3.0, EventKind::completion, 1, 2},
      {3.0, EventKind::completion, 2, 1}, {3.0, EventKind::completion, 3, 0},
  };
  t.idle_episodes = derive_idle_episodes(t);
  EXPECT_DOUBLE_EQ(tau_epsilon(t, 1.5), 3.25);
  const DiscreteMeasure zeta = DiscreteMeasure::dirac(1.5);
  const std::vector<double> grid{0, 0.5, 1, 2, 3, 3.2, 3.3, 4, 5};
  const FairnessPath path = fairness_path(t, grid, zeta);
  const FairnessPath shifted = shift_epsilon(path, 1.5, t);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid[j] <= 3.25) {
      EXPECT_EQ(shifted.measures[j], zeta) << grid[j];
    } else {
      EXPECT_EQ(shifted.measures[j], path.measures[j]) << grid[j];
    }
  }
}

TEST(ShiftEpsilon, MonotoneInEpsilon) {
  const Trajectory t = simulated(Policy::RANDOM_IDLE, 7);
  const FairnessPath path = fairness_path(t, sampling_grid(10, 0.05), DiscreteMeasure::dirac(2));
  const double e1 = 0.05, e2 = 0.2;
  const FairnessPath s1 = shift_epsilon(path, e1, t), s2 = shift_epsilon(path, e2, t);
  const double tau2 = tau_epsilon(t, e2);
  ASSERT_LT(tau2, 10);
  EXPECT_LE(tau_epsilon(t, e1), tau2);
  for (std::size_t j = 0; j < path.grid.size(); ++j) {
    if (path.grid[j] > tau2) EXPECT_EQ(s1.measures[j], s2.measures[j]);
  }
}

TEST(MeanOfMeasure, Examples) {
  EXPECT_DOUBLE_EQ(mean_of_measure(DiscreteMeasure::dirac(1.7)), 1.7);
  EXPECT_NEAR(mean_of_measure(blind_limit_measure(RateDistribution::two_point(1, 0.5, 2))), 5.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(mean_of_measure(DiscreteMeasure({{1, 0.5}, {2, 0.5}})), 1.5);
  EXPECT_THROW(mean_of_measure(DiscreteMeasure({{1, 0.5}})), std::invalid_argument);
}

TEST(BlindLimit, Examples) {
  EXPECT_EQ(blind_limit_measure(RateDistribution::point(1.3)), DiscreteMeasure::dirac(1.3));
  const DiscreteMeasure two = blind_limit_measure(RateDistribution::two_point(1, 0.5, 2));
  EXPECT_NEAR(two.weight_at(1), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(two.weight_at(2), 2.0 / 3.0, 1e-12);
  const DiscreteMeasure three = blind_limit_measure(RateDistribution::discrete({{1, 0.25}, {2, 0.25}, {3, 0.5}}));
  EXPECT_NEAR(three.weight_at(1), 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(three.weight_at(2), 2.0 / 9.0, 1e-12);
  EXPECT_NEAR(three.weight_at(3), 6.0 / 9.0, 1e-12);
}

TEST(BlindLimit, UniformDiscretizationMean) {
  // Size-biased U(1, 2) has mean E[mu^2] / E[mu] = (7/3) / 1.5.
  const DiscreteMeasure m = blind_limit_measure(RateDistribution::uniform(1, 2), 256);
  EXPECT_NEAR(mean_of_measure(m), 14.0 / 9.0, 1e-5);
}

TEST(PredictedLimit, PolicyClasses) {
  const auto f = RateDistribution::two_point(1, 0.5, 2);
  EXPECT_EQ(predicted_limit(Policy::FSF, f), DiscreteMeasure::dirac(1));
  EXPECT_EQ(predicted_limit(Policy::SSF, f), DiscreteMeasure::dirac(2));
  EXPECT_EQ(predicted_limit(Policy::LISF, f), blind_limit_measure(f));
  EXPECT_EQ(predicted_limit(Policy::RANDOM_IDLE, f), blind_limit_measure(f));
}

TEST(Wasserstein, Examples) {
  const DiscreteMeasure m({{1, 0.3}, {2.5, 0.7}});
  EXPECT_EQ(wasserstein1(m, m), 0.0);
  EXPECT_DOUBLE_EQ(wasserstein1(DiscreteMeasure::dirac(1.2), DiscreteMeasure::dirac(3.7)), 2.5);
  EXPECT_DOUBLE_EQ(wasserstein1(DiscreteMeasure({{1, 0.5}, {2, 0.5}}), DiscreteMeasure::dirac(1)), 0.5);
}

TEST(Wasserstein, MetricAxiomsOnRandomMeasures) {
  RngStream rng(77, 0);
  auto random_measure = [&] {
    std::vector<Atom> atoms;
    const int k = 1 + static_cast<int>(rng.below(5));
    double total = 0;
    for (int i = 0; i < k; ++i) {
      atoms.push_back({0.5 + 2.5 * rng.uniform_open(), rng.uniform_open()});
      total += atoms.back().weight;
    }
    for (auto& a : atoms) a.weight /= total;
    return DiscreteMeasure(atoms);
  };
  for (int trial = 0; trial < 500; ++trial) {
    const DiscreteMeasure a = random_measure(), b = random_measure(), c = random_measure();
    const double ab = wasserstein1(a, b), ba = wasserstein1(b, a);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_EQ(wasserstein1(a, a), 0.0);
    EXPECT_LE(ab, wasserstein1(a, c) + wasserstein1(c, b) + 1e-12);
  }
}

TEST(DiscreteMeasure, CanonicalizationMergesAtoms) {
  const DiscreteMeasure m({{2, 0.25}, {1, 0.25}, {2, 0.5}});
  ASSERT_EQ(m.atoms().size(), 2u);
  EXPECT_EQ(m.atoms()[0], (Atom{1, 0.25}));
  EXPECT_EQ(m.atoms()[1], (Atom{2, 0.75}));
  EXPECT_TRUE(m.is_probability());
  EXPECT_EQ(DiscreteMeasure({{1, 0.0}, {2, 1.0}}), DiscreteMeasure::dirac(2));
  EXPECT_THROW(DiscreteMeasure({{1, -0.1}}), std::invalid_argument);
}

TEST(BorelSet, MassAndComplement) {
  const DiscreteMeasure m({{1, 0.2}, {1.5, 0.3}, {2, 0.5}});
  EXPECT_DOUBLE_EQ(m.mass(BorelSet::half_open(1, 2)), 0.5);
  EXPECT_DOUBLE_EQ(m.mass(BorelSet::singleton(2)), 0.5);
  EXPECT_DOUBLE_EQ(m.mass(BorelSet::at_least(1.5)), 0.8);
  const BorelSet a = BorelSet::half_open(1, 2);
  EXPECT_DOUBLE_EQ(m.mass(a) + m.mass(a.complement()), m.total());
  EXPECT_DOUBLE_EQ(m.mass(BorelSet::singleton(2).complement()), 0.5);
}
