#include "hwsim/distributions.hpp"

#include <algorithm>
#include <cmath>

namespace hwsim {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

void check_probability(double p, const char* key) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(key, "probability must lie in [0, 1]");
  }
}

}  // namespace

InterarrivalLaw InterarrivalLaw::exponential() { return InterarrivalLaw{}; }

InterarrivalLaw InterarrivalLaw::erlang(int k) {
  if (k < 1) throw ValidationError("arrival.k", "Erlang shape must be >= 1");
  InterarrivalLaw law;
  law.kind_ = Kind::erlang;
  law.k_ = k;
  return law;
}

InterarrivalLaw InterarrivalLaw::hyperexponential(double p, double r1, double r2) {
  check_probability(p, "arrival.p");
  if (!finite_positive(r1)) throw ValidationError("arrival.r1", "rate must be positive");
  if (!finite_positive(r2)) throw ValidationError("arrival.r2", "rate must be positive");
  const double mean = p / r1 + (1.0 - p) / r2;
  if (std::abs(mean - 1.0) > 1e-9) {
    throw ValidationError("arrival", "hyperexponential mean p/r1 + (1-p)/r2 must equal 1");
  }
  InterarrivalLaw law;
  law.kind_ = Kind::hyperexponential;
  law.p_ = p;
  law.r1_ = r1;
  law.r2_ = r2;
  return law;
}

InterarrivalLaw InterarrivalLaw::deterministic() {
  InterarrivalLaw law;
  law.kind_ = Kind::deterministic;
  return law;
}

double InterarrivalLaw::ca2() const {
  switch (kind_) {
    case Kind::exponential:
      return 1.0;
    case Kind::erlang:
      return 1.0 / k_;
    case Kind::hyperexponential:
      return 2.0 * (p_ / (r1_ * r1_) + (1.0 - p_) / (r2_ * r2_)) - 1.0;
    case Kind::deterministic:
      return 0.0;
  }
  return 0.0;
}

double InterarrivalLaw::sample(RngStream& stream) const {
  switch (kind_) {
    case Kind::exponential:
      return stream.exponential(1.0);
    case Kind::erlang: {
      double sum = 0.0;
      for (int i = 0; i < k_; ++i) sum += stream.exponential(static_cast<double>(k_));
      return sum;
    }
    case Kind::hyperexponential: {
      const double u = stream.uniform_open();
      return stream.exponential(u < p_ ? r1_ : r2_);
    }
    case Kind::deterministic:
      return 1.0;
  }
  return 1.0;
}

const char* to_string(InterarrivalLaw::Kind kind) {
  switch (kind) {
    case InterarrivalLaw::Kind::exponential:
      return "exponential";
    case InterarrivalLaw::Kind::erlang:
      return "erlang";
    case InterarrivalLaw::Kind::hyperexponential:
      return "hyperexponential";
    case InterarrivalLaw::Kind::deterministic:
      return "deterministic";
  }
  return "?";
}

RateDistribution RateDistribution::point(double mu) {
  if (!finite_positive(mu)) throw ValidationError("rate_dist.mu", "rate must be positive and finite");
  RateDistribution d;
  d.kind_ = Kind::point;
  d.atoms_ = {{mu, 1.0}};
  return d;
}

RateDistribution RateDistribution::two_point(double mu1, double p1, double mu2) {
  if (!finite_positive(mu1)) throw ValidationError("rate_dist.mu1", "rate must be positive and finite");
  if (!finite_positive(mu2)) throw ValidationError("rate_dist.mu2", "rate must be positive and finite");
  check_probability(p1, "rate_dist.p1");
  RateDistribution d;
  d.kind_ = Kind::two_point;
  d.atoms_ = {{mu1, p1}, {mu2, 1.0 - p1}};
  return d;
}

RateDistribution RateDistribution::uniform(double a, double b) {
  if (!finite_positive(a)) throw ValidationError("rate_dist.a", "lower bound must be positive");
  if (!std::isfinite(b) || !(b > a)) throw ValidationError("rate_dist.b", "upper bound must exceed lower bound");
  RateDistribution d;
  d.kind_ = Kind::uniform;
  d.a_ = a;
  d.b_ = b;
  return d;
}

RateDistribution RateDistribution::discrete(std::vector<std::pair<double, double>> atoms) {
  if (atoms.empty()) throw ValidationError("rate_dist.atoms", "at least one atom required");
  double total = 0.0;
  for (const auto& [mu, p] : atoms) {
    if (!finite_positive(mu)) throw ValidationError("rate_dist.atoms", "rates must be positive and finite");
    check_probability(p, "rate_dist.atoms");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("rate_dist.atoms", "probabilities must sum to 1");
  }
  std::sort(atoms.begin(), atoms.end());
  RateDistribution d;
  d.kind_ = Kind::discrete;
  d.atoms_ = std::move(atoms);
  return d;
}

double RateDistribution::support_min() const {
  if (kind_ == Kind::uniform) return a_;
  for (const auto& [mu, p] : atoms_) {
    if (p > 0.0) return mu;
  }
  return atoms_.front().first;
}

double RateDistribution::support_max() const {
  if (kind_ == Kind::uniform) return b_;
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (it->second > 0.0) return it->first;
  }
  return atoms_.back().first;
}

double RateDistribution::mean() const {
  if (kind_ == Kind::uniform) return 0.5 * (a_ + b_);
  double m = 0.0;
  for (const auto& [mu, p] : atoms_) m += mu * p;
  return m;
}

double RateDistribution::second_moment() const {
  if (kind_ == Kind::uniform) return (a_ * a_ + a_ * b_ + b_ * b_) / 3.0;
  double m = 0.0;
  for (const auto& [mu, p] : atoms_) m += mu * mu * p;
  return m;
}

bool RateDistribution::in_support(double mu) const {
  if (kind_ == Kind::uniform) return mu >= a_ && mu <= b_;
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [mu](const auto& atom) { return atom.first == mu && atom.second > 0.0; });
}

double RateDistribution::sample(RngStream& stream) const {
  if (kind_ == Kind::uniform) return a_ + (b_ - a_) * stream.uniform_open();
  if (atoms_.size() == 1) return atoms_.front().first;
  const double u = stream.uniform_open();
  double cumulative = 0.0;
  for (const auto& [mu, p] : atoms_) {
    cumulative += p;
    if (u < cumulative) return mu;
  }
  return support_max();
}

std::vector<double> RateDistribution::sample_n(RngStream& stream, std::size_t n) const {
  if (n == 0) throw std::invalid_argument("sample_rates: n must be >= 1");
  std::vector<double> rates(n);
  for (auto& r : rates) r = sample(stream);
  return rates;
}

const char* to_string(RateDistribution::Kind kind) {
  switch (kind) {
    case RateDistribution::Kind::point:
      return "point";
    case RateDistribution::Kind::two_point:
      return "two_point";
    case RateDistribution::Kind::uniform:
      return "uniform";
    case RateDistribution::Kind::discrete:
      return "discrete";
  }
  return "?";
}

}  // namespace hwsim
