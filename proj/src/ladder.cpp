#include "hwsim/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hwsim/stats.hpp"

namespace hwsim {

void LadderSpec::validate() const {
  if (n_values.empty()) throw ValidationError("n_values", "at least one level required");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw ValidationError("n_values", "server counts must be >= 1");
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw ValidationError("n_values", "must be strictly increasing");
    }
  }
  if (!std::isfinite(lambda_hat)) throw ValidationError("lambda_hat", "must be finite");
  if (!std::isfinite(gamma) || gamma < 0.0) throw ValidationError("gamma", "must be finite and >= 0");
  if (!std::isfinite(xi0)) throw ValidationError("xi0", "must be finite");
  if (!std::isfinite(horizon) || horizon < 0.0) throw ValidationError("horizon", "must be finite and >= 0");
  if (reps < 1) throw ValidationError("reps", "must be >= 1");
  if (!std::isfinite(grid_spacing) || grid_spacing < 0.0) {
    throw ValidationError("grid_spacing", "must be finite and >= 0");
  }
  for (int n : n_values) {
    if (!(lambda_for(n) > 0.0)) {
      throw ValidationError("lambda_hat", "arrival rate n*mean + lambda_hat*sqrt(n) must be positive for n=" +
                                              std::to_string(n));
    }
  }
}

double LadderSpec::lambda_for(int n) const {
  return n * rate_dist.mean() + lambda_hat * std::sqrt(static_cast<double>(n));
}

std::int64_t LadderSpec::x0_for(int n) const {
  const double target = n + xi0 * std::sqrt(static_cast<double>(n));
  return std::max<std::int64_t>(0, std::llround(target));
}

std::uint64_t replication_stream_id(int n, int rep) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
         static_cast<std::uint32_t>(rep);
}

std::vector<SystemConfig> build_ladder(const LadderSpec& spec) {
  spec.validate();
  std::vector<SystemConfig> configs;
  configs.reserve(spec.n_values.size() * static_cast<std::size_t>(spec.reps));
  for (int n : spec.n_values) {
    std::vector<double> frozen;
    if (spec.freeze_rates) {
      RngStream stream(spec.base_seed, replication_stream_id(n, -1), StreamComponent::rates);
      frozen = spec.rate_dist.sample_n(stream, static_cast<std::size_t>(n));
    }
    for (int rep = 0; rep < spec.reps; ++rep) {
      SystemConfig c;
      c.n = n;
      c.lambda = spec.lambda_for(n);
      c.arrival_law = spec.arrival_law;
      c.rate_dist = spec.rate_dist;
      c.rates = frozen;
      c.gamma = spec.gamma;
      c.x0 = spec.x0_for(n);
      c.horizon = spec.horizon;
      c.policy = spec.policy;
      c.construction = spec.construction;
      c.seed = RngStream(spec.base_seed, replication_stream_id(n, rep));
      c.grid_spacing = spec.grid_spacing;
      configs.push_back(std::move(c));
    }
  }
  return configs;
}

ScaledPath scale(const Trajectory& traj) {
  const int n = traj.config.n;
  const double root = std::sqrt(static_cast<double>(n));
  ScaledPath p;
  p.n = n;
  for (const GridSample& g : traj.grid) {
    p.grid.push_back(g.time);
    p.xhat.push_back(static_cast<double>(g.headcount - n) / root);
    p.ihat.push_back(static_cast<double>(g.idle) / root);
    p.ibar.push_back(static_cast<double>(g.idle) / n);
  }
  std::int64_t max_idle = std::max<std::int64_t>(n - traj.config.x0, 0);
  for (const EventRecord& r : traj.events) {
    max_idle = std::max<std::int64_t>(max_idle, n - r.headcount);
  }
  p.sup_ihat = static_cast<double>(max_idle) / root;
  p.sup_ibar = static_cast<double>(max_idle) / n;
  double effort = 0.0;
  for (std::size_t k = 0; k < traj.cumulative_idle.size(); ++k) {
    effort += traj.config.rates[k] * traj.cumulative_idle[k];
  }
  p.idle_effort = effort / n;
  p.xhat_terminal = static_cast<double>(traj.final_headcount() - n) / root;
  return p;
}

std::size_t scaled_nonidling_violations(const ScaledPath& path) {
  const double root = std::sqrt(static_cast<double>(path.n));
  std::size_t bad = 0;
  for (std::size_t j = 0; j < path.xhat.size(); ++j) {
    const double expected = std::round(std::max(-path.xhat[j], 0.0) * root) / root;
    if (std::abs(path.ihat[j] - expected) > 1e-9) ++bad;
  }
  return bad;
}

const LadderRow* IdlenessScalingReport::find(int n, const std::string& statistic) const {
  for (const auto& r : rows) {
    if (r.n == n && r.statistic == statistic) return &r;
  }
  return nullptr;
}

IdlenessScalingReport idleness_scaling_report(const std::map<int, std::vector<ScaledPath>>& paths) {
  IdlenessScalingReport report;
  if (paths.size() < 2) report.warnings.push_back("fewer than 2 ladder levels");
  struct Medians {
    double sup_ihat, sup_ibar, effort;
  };
  std::map<int, Medians> medians;
  for (const auto& [n, level] : paths) {
    if (level.size() < 30) {
      report.warnings.push_back("n=" + std::to_string(n) + ": only " + std::to_string(level.size()) +
                                " replications (>= 30 recommended)");
    }
    if (level.empty()) continue;
    std::vector<double> a, b, c;
    for (const auto& p : level) {
      a.push_back(p.sup_ihat);
      b.push_back(p.sup_ibar);
      c.push_back(p.idle_effort);
    }
    const auto reps = static_cast<int>(level.size());
    const Summary sa = summarize(a), sb = summarize(b), sc = summarize(c);
    report.rows.push_back({n, "sup_ihat", sa.median, sa.q25, sa.q75, reps});
    report.rows.push_back({n, "sup_ibar", sb.median, sb.q25, sb.q75, reps});
    report.rows.push_back({n, "idle_effort", sc.median, sc.q25, sc.q75, reps});
    medians[n] = {sa.median, sb.median, sc.median};
  }
  for (auto it = medians.begin(); it != medians.end() && std::next(it) != medians.end(); ++it) {
    const auto& [n1, m1] = *it;
    const auto& [n2, m2] = *std::next(it);
    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN(); };
    report.ratios.push_back({n1, n2, ratio(m2.sup_ihat, m1.sup_ihat), ratio(m2.sup_ibar, m1.sup_ibar),
                             std::sqrt(static_cast<double>(n1) / n2), ratio(m2.effort, m1.effort)});
  }
  return report;
}

}  // namespace hwsim
