#include "hwsim/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwsim {

double MartingaleTerms::residual(std::size_t j, const BorelSet& set) const {
  double sum = 0.0;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (!set.contains(atoms[a])) continue;
    sum += scale * (observed[j][a] - compensator[j][a] + remainder[j][a]);
  }
  return sum;
}

MartingaleTerms lisf_martingale_terms(const Trajectory& traj, const std::vector<double>& grid) {
  const SystemConfig& cfg = traj.config;
  if (cfg.policy != Policy::LISF) {
    throw std::invalid_argument("lisf_martingale_residual: trajectory policy must be LISF");
  }
  if (cfg.arrival_law.kind() != InterarrivalLaw::Kind::exponential) {
    throw std::invalid_argument("lisf_martingale_residual: interarrivals must be exponential");
  }
  if (cfg.construction != Construction::potential_stream) {
    throw std::invalid_argument("lisf_martingale_residual: needs the potential-stream construction");
  }
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("lisf_martingale_residual: lambda must be positive");

  const auto n = static_cast<std::size_t>(cfg.n);
  const double lambda = cfg.lambda;

  MartingaleTerms terms;
  terms.atoms = cfg.rates;
  std::sort(terms.atoms.begin(), terms.atoms.end());
  terms.atoms.erase(std::unique(terms.atoms.begin(), terms.atoms.end()), terms.atoms.end());
  const std::size_t atom_count = terms.atoms.size();
  std::vector<std::size_t> atom_of(n);
  double total_rate = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    atom_of[k] = static_cast<std::size_t>(
        std::lower_bound(terms.atoms.begin(), terms.atoms.end(), cfg.rates[k]) - terms.atoms.begin());
    total_rate += cfg.rates[k];
  }
  terms.grid = grid;
  terms.scale = 1.0 / std::sqrt(static_cast<double>(n));
  terms.observed.assign(grid.size(), std::vector<double>(atom_count, 0.0));
  terms.compensator.assign(grid.size(), std::vector<double>(atom_count, 0.0));
  terms.remainder.assign(grid.size(), std::vector<double>(atom_count, 0.0));

  // Compensator: replay the events, evaluating the closed form just before
  // each potential epoch.
  std::vector<double> busy_mass(atom_count, 0.0);
  std::vector<std::uint8_t> busy(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (initially_busy(cfg, static_cast<ServerIndex>(k))) {
      busy[k] = 1;
      busy_mass[atom_of[k]] += cfg.rates[k];
    }
  }
  std::int64_t x = cfg.x0;
  std::vector<double> running(atom_count, 0.0);
  std::size_t next_grid = 0;
  const auto& ev = traj.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const EventRecord& r = ev[i];
    while (next_grid < grid.size() && grid[next_grid] < r.time) {
      terms.compensator[next_grid++] = running;
    }
    const auto k = static_cast<std::size_t>(r.server);
    switch (r.kind) {
      case EventKind::completion:
      case EventKind::potential_no_op: {
        if (x <= cfg.n) {
          const auto idle = static_cast<double>(cfg.n - x);
          const double mean_idle = (idle + 1.0) / lambda;
          for (std::size_t a = 0; a < atom_count; ++a) {
            running[a] += busy_mass[a] / total_rate * mean_idle;
          }
        }
        if (r.kind == EventKind::completion) {
          busy[k] = 0;
          busy_mass[atom_of[k]] -= cfg.rates[k];
        }
        break;
      }
      case EventKind::routing:
        busy[k] = 1;
        busy_mass[atom_of[k]] += cfg.rates[k];
        break;
      case EventKind::arrival:
      case EventKind::abandonment:
        break;
    }
    x = r.headcount;
    // Rebuild after many +/- updates so the masses do not drift.
    if ((i & 0xFFF) == 0xFFF) {
      std::fill(busy_mass.begin(), busy_mass.end(), 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        if (busy[s]) busy_mass[atom_of[s]] += cfg.rates[s];
      }
    }
  }
  while (next_grid < grid.size()) terms.compensator[next_grid++] = running;

  // Observed idle time and expected remaining idle time from the episodes.
  struct Idle {
    double since;
    ServerIndex server;
    bool counted;
  };
  std::vector<Idle> idle_now;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t = grid[j];
    idle_now.clear();
    for (const IdleEpisode& ep : traj.idle_episodes) {
      if (ep.start > t) continue;
      const bool still_idle = t < ep.end || (ep.open && t <= ep.end);
      if (!ep.initial) {
        terms.observed[j][atom_of[static_cast<std::size_t>(ep.server)]] += std::min(ep.end, t) - ep.start;
      }
      if (still_idle) idle_now.push_back({ep.start, ep.server, !ep.initial});
    }
    std::sort(idle_now.begin(), idle_now.end(), [](const Idle& a, const Idle& b) {
      return a.since != b.since ? a.since < b.since : a.server < b.server;
    });
    for (std::size_t p = 0; p < idle_now.size(); ++p) {
      if (!idle_now[p].counted) continue;
      terms.remainder[j][atom_of[static_cast<std::size_t>(idle_now[p].server)]] +=
          static_cast<double>(p + 1) / lambda;
    }
  }
  return terms;
}

MartingaleDiagnostic lisf_martingale_residual(const Trajectory& traj, const BorelSet& set_A,
                                              std::vector<double> grid) {
  if (grid.empty()) {
    for (const GridSample& g : traj.grid) grid.push_back(g.time);
    if (grid.empty()) grid = sampling_grid(traj.config.horizon, traj.config.effective_grid_spacing());
  }
  const MartingaleTerms terms = lisf_martingale_terms(traj, grid);
  MartingaleDiagnostic diag;
  diag.policy = traj.config.policy;
  diag.set_A = set_A;
  diag.grid = grid;
  diag.residual_path.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) diag.residual_path.push_back(terms.residual(j, set_A));
  diag.terminal = diag.residual_path.empty() ? 0.0 : diag.residual_path.back();
  return diag;
}

}  // namespace hwsim
