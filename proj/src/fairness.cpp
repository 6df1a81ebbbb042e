#include "hwsim/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwsim {

IdlenessPath idleness_path(const Trajectory& traj) {
  const std::int64_t n = traj.config.n;
  IdlenessPath path;
  path.end = traj.config.horizon;
  path.scale = 1.0 / std::sqrt(static_cast<double>(n));
  path.times.push_back(0.0);
  path.idle.push_back(static_cast<double>(std::max<std::int64_t>(n - traj.config.x0, 0)));
  for (const EventRecord& r : traj.events) {
    const auto idle = static_cast<double>(std::max<std::int64_t>(n - r.headcount, 0));
    if (idle == path.idle.back()) continue;
    if (r.time == path.times.back()) {
      path.idle.back() = idle;
    } else {
      path.times.push_back(r.time);
      path.idle.push_back(idle);
    }
  }
  return path;
}

double tau_epsilon(const IdlenessPath& path, double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("tau_epsilon: epsilon must be >= 0");
  double integral = 0.0;
  for (std::size_t j = 0; j < path.times.size(); ++j) {
    const double start = path.times[j];
    const double stop = j + 1 < path.times.size() ? path.times[j + 1] : path.end;
    const double level = path.idle[j] * path.scale;
    if (level > 0.0 && stop > start) {
      const double gained = level * (stop - start);
      if (integral + gained > epsilon) return start + (epsilon - integral) / level;
      integral += gained;
    }
  }
  return kNever;
}

double tau_epsilon(const Trajectory& traj, double epsilon) {
  return tau_epsilon(idleness_path(traj), epsilon);
}

namespace {

DiscreteMeasure grouped_by_rate(const std::vector<double>& rates,
                                const std::vector<double>& idle, double factor) {
  std::vector<Atom> atoms;
  atoms.reserve(rates.size());
  for (std::size_t k = 0; k < rates.size(); ++k) atoms.push_back({rates[k], idle[k] * factor});
  return DiscreteMeasure(std::move(atoms));
}

}  // namespace

DiscreteMeasure cumulative_idleness(const Trajectory& traj, double t) {
  if (t < 0.0 || t > traj.config.horizon) {
    throw std::invalid_argument("cumulative_idleness: t outside [0, horizon]");
  }
  const double factor = 1.0 / std::sqrt(static_cast<double>(traj.config.n));
  return grouped_by_rate(traj.config.rates, idle_time_by(traj, t), factor);
}

DiscreteMeasure fairness_measure(const Trajectory& traj, double t, const DiscreteMeasure& zeta) {
  if (!zeta.is_probability()) throw std::invalid_argument("fairness_measure: zeta must be a probability measure");
  const DiscreteMeasure c = cumulative_idleness(traj, t);
  if (!(c.total() > 0.0)) return zeta;
  return c.normalized();
}

FairnessPath fairness_path(const Trajectory& traj, const std::vector<double>& grid,
                           const DiscreteMeasure& zeta) {
  FairnessPath path;
  path.grid = grid;
  path.zeta = zeta;
  path.tau0 = tau_epsilon(traj, 0.0);
  path.measures.reserve(grid.size());
  for (double t : grid) path.measures.push_back(fairness_measure(traj, t, zeta));
  return path;
}

FairnessPath shift_epsilon(const FairnessPath& path, double epsilon, const Trajectory& traj) {
  const double tau = tau_epsilon(traj, epsilon);
  FairnessPath shifted = path;
  for (std::size_t j = 0; j < shifted.grid.size(); ++j) {
    if (shifted.grid[j] <= tau) shifted.measures[j] = path.zeta;
  }
  return shifted;
}

DiscreteMeasure rate_measure(const RateDistribution& dist, int bins) {
  std::vector<Atom> atoms;
  if (dist.kind() == RateDistribution::Kind::uniform) {
    if (bins < 1) throw std::invalid_argument("rate_measure: bins must be >= 1");
    const double a = dist.uniform_low();
    const double width = (dist.uniform_high() - a) / bins;
    for (int j = 0; j < bins; ++j) atoms.push_back({a + (j + 0.5) * width, 1.0 / bins});
  } else {
    for (const auto& [mu, p] : dist.atoms()) atoms.push_back({mu, p});
  }
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure blind_limit_measure(const RateDistribution& dist, int bins) {
  DiscreteMeasure f = rate_measure(dist, bins);
  std::vector<Atom> atoms;
  double normalizer = 0.0;
  for (const Atom& a : f.atoms()) {
    atoms.push_back({a.location, a.location * a.weight});
    normalizer += a.location * a.weight;
  }
  for (Atom& a : atoms) a.weight /= normalizer;
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure predicted_limit(Policy policy, const RateDistribution& dist) {
  switch (policy) {
    case Policy::FSF:
      return DiscreteMeasure::dirac(dist.support_min());
    case Policy::SSF:
      return DiscreteMeasure::dirac(dist.support_max());
    case Policy::LISF:
    case Policy::RANDOM_IDLE:
      return blind_limit_measure(dist);
  }
  throw std::logic_error("predicted_limit: unknown policy");
}

}  // namespace hwsim
