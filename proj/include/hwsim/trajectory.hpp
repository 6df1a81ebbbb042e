#pragma once

#include <cstdint>
#include <vector>

#include "hwsim/system.hpp"

namespace hwsim {

enum class EventKind : std::uint8_t {
  arrival = 0,
  routing = 1,          // a customer starts service at `server`
  completion = 2,       // `server` finishes a service
  potential_no_op = 3,  // potential epoch assigned to an idle `server`
  abandonment = 4,
};

const char* to_string(EventKind kind);

struct EventRecord {
  double time;
  EventKind kind;
  ServerIndex server;      // -1 when not server specific
  std::int64_t headcount;  // X(t) after the record

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// A maximal interval on which one server is idle. `initial` marks servers
/// idle at time 0; `open` marks episodes still running at the horizon, whose
/// `end` is clipped to the horizon.
struct IdleEpisode {
  ServerIndex server;
  double rate;
  double start;
  double end;
  bool initial;
  bool open;

  double length() const { return end - start; }
  friend bool operator==(const IdleEpisode&, const IdleEpisode&) = default;
};

struct GridSample {
  double time;
  std::int64_t headcount;
  std::int64_t idle;

  friend bool operator==(const GridSample&, const GridSample&) = default;
};

/// Recorded piecewise-constant paths of one replication. `config.rates`
/// always holds the realized rates.
struct Trajectory {
  SystemConfig config;
  std::vector<EventRecord> events;
  std::vector<IdleEpisode> idle_episodes;
  std::vector<GridSample> grid;
  std::vector<double> cumulative_idle;  // per server, over [0, horizon]

  int n() const { return config.n; }
  double horizon() const { return config.horizon; }
  const std::vector<double>& rates() const { return config.rates; }
  /// X(horizon).
  std::int64_t final_headcount() const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Initial placement: the lowest-indexed min(x0, n) servers are busy.
inline bool initially_busy(const SystemConfig& config, ServerIndex k) {
  return k < config.x0;
}

/// Uniform sampling grid [0, dt, 2dt, ..., horizon].
std::vector<double> sampling_grid(double horizon, double spacing);

/// Reconstructs idle episodes from the event records alone.
std::vector<IdleEpisode> derive_idle_episodes(const Trajectory& traj);

/// Per-server idle time over [0, t] summed from clipped episodes.
std::vector<double> idle_time_by(const Trajectory& traj, double t);

/// X(t) with right-continuous convention.
std::int64_t headcount_at(const Trajectory& traj, double t);

/// Counts of violated path identities found by an independent replay of the
/// event records.
struct TrajectoryAudit {
  std::size_t checked_epochs = 0;
  std::size_t nonidling_violations = 0;    // idle count != (X - n)^-
  std::size_t queue_violations = 0;        // queue length != (X - n)^+
  std::size_t conservation_violations = 0; // X != X0 + A - D - abandonments
  std::size_t routing_violations = 0;      // routing to a busy server
  std::size_t completion_violations = 0;   // completion at an idle server
  std::size_t balance_violations = 0;      // I_k != I_k(0) - R_k + D_k
  std::size_t order_violations = 0;        // decreasing event times
  std::size_t episode_mismatches = 0;      // recorded vs replayed episodes

  std::size_t total() const {
    return nonidling_violations + queue_violations + conservation_violations +
           routing_violations + completion_violations + balance_violations +
           order_violations + episode_mismatches;
  }
};

TrajectoryAudit audit_trajectory(const Trajectory& traj);

}  // namespace hwsim
