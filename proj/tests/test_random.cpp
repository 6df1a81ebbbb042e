#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "hwsim/distributions.hpp"
#include "hwsim/random.hpp"

using namespace hwsim;

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

std::vector<double> draw(const InterarrivalLaw& law, std::size_t count, std::uint64_t stream = 0) {
  RngStream rng(42, stream, StreamComponent::arrivals);
  std::vector<double> v(count);
  for (auto& x : v) x = sample_interarrival(rng, law);
  return v;
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  using W = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, SameKeyReproducesSequence) {
  RngStream a(7, 3, StreamComponent::potential);
  RngStream b(7, 3, StreamComponent::potential);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, ComponentsAndStreamsDiffer) {
  RngStream base(7, 3);
  RngStream a = base.substream(StreamComponent::arrivals);
  RngStream b = base.substream(StreamComponent::potential);
  RngStream c(7, 4, StreamComponent::arrivals);
  std::set<std::uint64_t> firsts{a.next_u64(), b.next_u64(), c.next_u64()};
  EXPECT_EQ(firsts.size(), 3u);
}

TEST(RngStream, StreamIndependenceCorrelation) {
  RngStream a(11, 1);
  RngStream b(11, 2);
  const int count = 100000;
  std::vector<double> x(count), y(count);
  for (int i = 0; i < count; ++i) {
    x[i] = a.uniform_open();
    y[i] = b.uniform_open();
  }
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < count; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 0.01);
}

TEST(RngStream, UniformOpenStaysInside) {
  RngStream r(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngStream, BelowIsUniform) {
  RngStream r(5, 0);
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 30000; ++i) ++counts[r.below(3)];
  for (int c : counts) EXPECT_NEAR(c / 30000.0, 1.0 / 3.0, 0.015);
}

TEST(RngStream, NormalMoments) {
  RngStream r(9, 0, StreamComponent::brownian);
  std::vector<double> v(200000);
  for (auto& x : v) x = r.normal();
  EXPECT_NEAR(mean(v), 0.0, 0.01);
  EXPECT_NEAR(variance(v), 1.0, 0.015);
}

TEST(Interarrival, DeterministicIsOne) {
  for (double x : draw(InterarrivalLaw::deterministic(), 100)) EXPECT_EQ(x, 1.0);
  EXPECT_EQ(InterarrivalLaw::deterministic().ca2(), 0.0);
}

TEST(Interarrival, ErlangFourMean) {
  const auto v = draw(InterarrivalLaw::erlang(4), 1000000);
  EXPECT_NEAR(mean(v), 1.0, 4 * 0.5 / 1000);
  EXPECT_DOUBLE_EQ(InterarrivalLaw::erlang(4).ca2(), 0.25);
}

TEST(Interarrival, ExponentialCa2) {
  const auto v = draw(InterarrivalLaw::exponential(), 1000000);
  EXPECT_NEAR(variance(v) / (mean(v) * mean(v)), 1.0, 0.02);
  EXPECT_EQ(InterarrivalLaw::exponential().ca2(), 1.0);
}

TEST(Interarrival, HyperexponentialMoments) {
  // p/r1 + (1-p)/r2 = 0.25/0.5 + 0.75/1.5 = 1
  const auto law = InterarrivalLaw::hyperexponential(0.25, 0.5, 1.5);
  const auto v = draw(law, 1000000, 1);
  EXPECT_NEAR(mean(v), 1.0, 0.006);
  EXPECT_NEAR(variance(v), law.ca2(), 0.03);
  EXPECT_GT(law.ca2(), 1.0);
}

TEST(Interarrival, InvalidParametersRejectedAtConstruction) {
  EXPECT_THROW(InterarrivalLaw::erlang(0), ValidationError);
  EXPECT_THROW(InterarrivalLaw::hyperexponential(1.5, 1, 1), ValidationError);
  EXPECT_THROW(InterarrivalLaw::hyperexponential(0.5, -1, 1), ValidationError);
  EXPECT_THROW(InterarrivalLaw::hyperexponential(0.5, 1, 2), ValidationError);  // mean != 1
}

TEST(Rates, PointIsConstant) {
  RngStream r(1, 0, StreamComponent::rates);
  EXPECT_EQ(sample_rates(r, RateDistribution::point(1.5), 3), (std::vector<double>{1.5, 1.5, 1.5}));
}

TEST(Rates, TwoPointFraction) {
  RngStream r(2, 0, StreamComponent::rates);
  const auto v = sample_rates(r, RateDistribution::two_point(1, 0.5, 2), 1000000);
  double twos = 0;
  for (double x : v) {
    ASSERT_TRUE(x == 1.0 || x == 2.0);
    twos += x == 2.0;
  }
  EXPECT_NEAR(twos / 1e6, 0.5, 0.002);
}

TEST(Rates, UniformMeanAndSupport) {
  RngStream r(3, 0, StreamComponent::rates);
  const auto v = sample_rates(r, RateDistribution::uniform(1, 2), 1000000);
  for (double x : v) ASSERT_TRUE(x >= 1.0 && x <= 2.0);
  EXPECT_NEAR(mean(v), 1.5, 0.002);
}

TEST(Rates, AnalyticMomentsMatchMonteCarlo) {
  const std::vector<RateDistribution> dists{
      RateDistribution::two_point(1, 0.3, 4), RateDistribution::uniform(0.5, 3),
      RateDistribution::discrete({{1, 0.25}, {2, 0.25}, {3, 0.5}})};
  for (const auto& d : dists) {
    RngStream r(4, 0, StreamComponent::rates);
    const auto v = d.sample_n(r, 1000000);
    const double se = std::sqrt(d.variance() / 1e6);
    EXPECT_NEAR(mean(v), d.mean(), 4 * se);
    double m2 = 0;
    for (double x : v) m2 += x * x;
    m2 /= 1e6;
    const double m2_se = std::sqrt((std::pow(d.support_max(), 4)) / 1e6);
    EXPECT_NEAR(m2, d.second_moment(), 4 * m2_se);
  }
}

TEST(Rates, Validation) {
  EXPECT_THROW(RateDistribution::two_point(1, 1.2, 2), ValidationError);
  EXPECT_THROW(RateDistribution::point(0), ValidationError);
  EXPECT_THROW(RateDistribution::uniform(2, 1), ValidationError);
  EXPECT_THROW(RateDistribution::discrete({{1, 0.5}, {2, 0.4}}), ValidationError);
  try {
    RateDistribution::two_point(1, 1.2, 2);
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "rate_dist.p1");
  }
}

TEST(Exponential, MeanRateOne) {
  RngStream r(5, 0, StreamComponent::patience);
  std::vector<double> v(1000000);
  for (auto& x : v) x = sample_exponential(r, 1.0);
  EXPECT_NEAR(mean(v), 1.0, 0.004);
}

TEST(Exponential, MeanRateTwo) {
  RngStream r(6, 0, StreamComponent::patience);
  std::vector<double> v(1000000);
  for (auto& x : v) x = sample_exponential(r, 2.0);
  EXPECT_NEAR(mean(v), 0.5, 0.002);
}

TEST(Exponential, QuantileOfZeroIsZero) {
  EXPECT_EQ(exponential_quantile(0.0, 1.0), 0.0);
  EXPECT_EQ(exponential_quantile(0.0, 3.0), 0.0);
  EXPECT_NEAR(exponential_quantile(1.0 - std::exp(-1.0), 1.0), 1.0, 1e-12);
}

TEST(Exponential, NonpositiveRateRejected) {
  RngStream r(1, 0);
  EXPECT_THROW(sample_exponential(r, 0.0), std::invalid_argument);
  EXPECT_THROW(sample_exponential(r, -1.0), std::invalid_argument);
}
