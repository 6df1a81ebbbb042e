#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <vector>

#include "hwsim/routing.hpp"
#include "hwsim/system.hpp"
#include "hwsim/trajectory.hpp"

namespace hwsim {

/// Discrete-event engine for one replication.
///
/// With Construction::potential_stream, completions come from a single
/// Poisson stream of rate sum(mu_k); each epoch is assigned to server k with
/// probability mu_k / sum(mu) and counts as a completion only if k is busy.
/// With Construction::per_server_timers, every service start draws its own
/// Exp(mu_k) duration.
class Simulator {
 public:
  /// Places min(x0, n) customers at the lowest-indexed servers and queues the
  /// rest with patience deadlines drawn at time 0.
  explicit Simulator(SystemConfig config);

  /// Processes the earliest pending event at or before the horizon. Returns
  /// the record of that event, or nullopt once nothing remains before the
  /// horizon. Stale patience deadlines are skipped silently.
  std::optional<EventRecord> step();

  /// Runs to the horizon and returns the recorded trajectory.
  Trajectory finish() &&;

  double clock() const { return clock_; }
  std::int64_t headcount() const { return headcount_; }
  std::size_t idle_count() const { return pool_.size(); }
  std::size_t queue_length() const { return queue_length_; }
  bool is_idle(ServerIndex k) const { return idle_[static_cast<std::size_t>(k)] != 0; }
  double idle_since(ServerIndex k) const { return idle_since_[static_cast<std::size_t>(k)]; }
  /// Integral of I_k over [0, clock].
  double cumulative_idle(ServerIndex k) const;
  const SystemConfig& config() const { return traj_.config; }
  const std::vector<EventRecord>& events() const { return traj_.events; }

 private:
  enum class Pending : std::uint8_t { arrival, potential, service_done, patience };

  struct QueuedEvent {
    double time;
    int priority;  // completion < arrival < abandonment
    std::uint64_t seq;
    Pending type;
    std::int64_t payload;  // server or customer id
  };
  struct Later {
    bool operator()(const QueuedEvent& a, const QueuedEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.seq > b.seq;
    }
  };

  void push(double time, Pending type, std::int64_t payload);
  void record(EventKind kind, ServerIndex server);
  void emit_grid_before(double t);
  void emit_grid_through(double t);

  void handle_arrival();
  void handle_potential();
  void handle_completion(ServerIndex k);
  bool handle_patience(std::int64_t customer);

  void make_busy(ServerIndex k);
  void make_idle(ServerIndex k);
  void enqueue_customer();
  void start_service(ServerIndex k);
  ServerIndex split(double u) const;
  void check_invariants() const;

  Trajectory traj_;
  bool per_server_ = false;
  double clock_ = 0.0;
  std::int64_t headcount_ = 0;

  std::vector<std::uint8_t> idle_;
  std::vector<double> idle_since_;
  std::vector<double> idle_accum_;
  std::vector<std::size_t> open_episode_;
  IdlePool pool_;

  std::deque<std::int64_t> queue_;
  std::vector<std::uint8_t> customer_state_;  // 0 waiting, 1 served, 2 abandoned
  std::size_t queue_length_ = 0;

  std::vector<double> rate_prefix_;
  double total_rate_ = 0.0;

  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, Later> events_;
  std::uint64_t seq_ = 0;

  std::vector<double> grid_times_;
  std::size_t next_grid_ = 0;

  RngStream arrivals_, potential_, splitting_, patience_, routing_, service_;
};

/// Potential-stream construction.
Trajectory simulate(const SystemConfig& config);
/// Per-server exponential timer construction.
Trajectory simulate_per_server(const SystemConfig& config);
/// Dispatches on config.construction.
Trajectory run_system(const SystemConfig& config);

}  // namespace hwsim
