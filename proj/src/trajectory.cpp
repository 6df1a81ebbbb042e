#include "hwsim/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace hwsim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::arrival:
      return "arrival";
    case EventKind::routing:
      return "routing";
    case EventKind::completion:
      return "completion";
    case EventKind::potential_no_op:
      return "potential_no_op";
    case EventKind::abandonment:
      return "abandonment";
  }
  return "?";
}

std::int64_t Trajectory::final_headcount() const {
  return events.empty() ? config.x0 : events.back().headcount;
}

std::vector<double> sampling_grid(double horizon, double spacing) {
  std::vector<double> grid{0.0};
  if (!(horizon > 0.0) || !(spacing > 0.0)) return grid;
  const auto steps = static_cast<std::size_t>(std::floor(horizon / spacing + 1e-9));
  for (std::size_t j = 1; j <= steps; ++j) grid.push_back(std::min(horizon, j * spacing));
  if (horizon - grid.back() > 1e-9 * horizon) {
    grid.push_back(horizon);
  } else {
    grid.back() = horizon;
  }
  return grid;
}

namespace {

// True when record i+1 is the service start that belongs to record i.
bool followed_by_routing(const std::vector<EventRecord>& ev, std::size_t i) {
  return i + 1 < ev.size() && ev[i + 1].kind == EventKind::routing &&
         ev[i + 1].time == ev[i].time;
}

}  // namespace

std::vector<IdleEpisode> derive_idle_episodes(const Trajectory& traj) {
  const SystemConfig& cfg = traj.config;
  const auto n = static_cast<std::size_t>(cfg.n);
  std::vector<IdleEpisode> episodes;
  std::vector<std::size_t> open(n, 0);
  std::vector<std::uint8_t> idle(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (!initially_busy(cfg, static_cast<ServerIndex>(k))) {
      idle[k] = 1;
      open[k] = episodes.size();
      episodes.push_back({static_cast<ServerIndex>(k), cfg.rates[k], 0.0, 0.0, true, false});
    }
  }
  const auto& ev = traj.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const auto k = static_cast<std::size_t>(ev[i].server);
    if (ev[i].kind == EventKind::completion) {
      if (followed_by_routing(ev, i) && ev[i + 1].server == ev[i].server) {
        ++i;  // handed straight to the next queued customer
        continue;
      }
      idle[k] = 1;
      open[k] = episodes.size();
      episodes.push_back({ev[i].server, cfg.rates[k], ev[i].time, ev[i].time, false, false});
    } else if (ev[i].kind == EventKind::routing && idle[k]) {
      idle[k] = 0;
      episodes[open[k]].end = ev[i].time;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (idle[k]) {
      episodes[open[k]].end = cfg.horizon;
      episodes[open[k]].open = true;
    }
  }
  return episodes;
}

std::vector<double> idle_time_by(const Trajectory& traj, double t) {
  std::vector<double> idle(static_cast<std::size_t>(traj.config.n), 0.0);
  for (const auto& ep : traj.idle_episodes) {
    const double end = std::min(ep.end, t);
    if (end > ep.start) idle[static_cast<std::size_t>(ep.server)] += end - ep.start;
  }
  return idle;
}

std::int64_t headcount_at(const Trajectory& traj, double t) {
  const auto& ev = traj.events;
  auto it = std::upper_bound(ev.begin(), ev.end(), t,
                             [](double value, const EventRecord& r) { return value < r.time; });
  if (it == ev.begin()) return traj.config.x0;
  return std::prev(it)->headcount;
}

TrajectoryAudit audit_trajectory(const Trajectory& traj) {
  TrajectoryAudit audit;
  const SystemConfig& cfg = traj.config;
  const auto n = static_cast<std::size_t>(cfg.n);
  const std::int64_t servers = cfg.n;

  std::vector<std::uint8_t> idle(n, 0), idle0(n, 0);
  std::vector<std::int64_t> routed(n, 0), completed(n, 0);
  std::int64_t idle_count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!initially_busy(cfg, static_cast<ServerIndex>(k))) {
      idle[k] = idle0[k] = 1;
      ++idle_count;
    }
  }
  std::int64_t x = cfg.x0;
  std::int64_t queue = std::max<std::int64_t>(cfg.x0 - servers, 0);
  std::int64_t arrivals = 0, completions = 0, abandonments = 0;
  double last_time = 0.0;

  const auto& ev = traj.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const EventRecord& r = ev[i];
    if (r.time < last_time) ++audit.order_violations;
    last_time = r.time;
    const auto k = static_cast<std::size_t>(r.server);
    switch (r.kind) {
      case EventKind::arrival:
        ++arrivals;
        ++x;
        if (!followed_by_routing(ev, i)) ++queue;
        break;
      case EventKind::routing: {
        if (!idle[k]) {
          ++audit.routing_violations;
        } else {
          idle[k] = 0;
          --idle_count;
        }
        ++routed[k];
        const bool from_queue = i > 0 && ev[i - 1].kind == EventKind::completion &&
                                ev[i - 1].time == r.time && ev[i - 1].server == r.server;
        if (from_queue) --queue;
        break;
      }
      case EventKind::completion:
        if (idle[k]) {
          ++audit.completion_violations;
        } else {
          idle[k] = 1;
          ++idle_count;
        }
        ++completed[k];
        ++completions;
        --x;
        break;
      case EventKind::potential_no_op:
        if (!idle[k]) ++audit.completion_violations;
        break;
      case EventKind::abandonment:
        ++abandonments;
        --x;
        --queue;
        break;
    }
    if (x != r.headcount || x != cfg.x0 + arrivals - completions - abandonments) {
      ++audit.conservation_violations;
    }
    if (followed_by_routing(ev, i) && r.kind != EventKind::routing) continue;
    ++audit.checked_epochs;
    if (idle_count != std::max<std::int64_t>(servers - x, 0)) ++audit.nonidling_violations;
    if (queue != std::max<std::int64_t>(x - servers, 0) || queue < 0) ++audit.queue_violations;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (idle[k] != idle0[k] - routed[k] + completed[k]) ++audit.balance_violations;
  }
  if (derive_idle_episodes(traj) != traj.idle_episodes) ++audit.episode_mismatches;
  return audit;
}

}  // namespace hwsim
