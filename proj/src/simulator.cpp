#include "hwsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwsim {

namespace {

constexpr int kPriorityCompletion = 0;
constexpr int kPriorityArrival = 1;
constexpr int kPriorityAbandonment = 2;

constexpr std::uint8_t kWaiting = 0;
constexpr std::uint8_t kServed = 1;
constexpr std::uint8_t kAbandoned = 2;

}  // namespace

const char* to_string(Construction c) {
  return c == Construction::potential_stream ? "potential_stream" : "per_server_timers";
}

void SystemConfig::validate() const {
  if (n < 1) throw ValidationError("n", "must be >= 1");
  if (!std::isfinite(lambda) || lambda < 0.0) throw ValidationError("lambda", "must be finite and >= 0");
  if (!std::isfinite(gamma) || gamma < 0.0) throw ValidationError("gamma", "must be finite and >= 0");
  if (x0 < 0) throw ValidationError("x0", "must be >= 0");
  if (!std::isfinite(horizon) || horizon < 0.0) throw ValidationError("horizon", "must be finite and >= 0");
  if (!std::isfinite(grid_spacing) || grid_spacing < 0.0) {
    throw ValidationError("grid_spacing", "must be finite and >= 0");
  }
  if (!rates.empty()) {
    if (rates.size() != static_cast<std::size_t>(n)) {
      throw ValidationError("rates", "length must equal n");
    }
    for (double r : rates) {
      if (!rate_dist.in_support(r)) throw ValidationError("rates", "rate outside rate_dist support");
    }
  }
}

double SystemConfig::effective_grid_spacing() const {
  return grid_spacing > 0.0 ? grid_spacing : 0.01 * horizon;
}

Simulator::Simulator(SystemConfig config) {
  config.validate();
  if (config.rates.empty()) {
    RngStream rate_stream = config.seed.substream(StreamComponent::rates);
    config.rates = config.rate_dist.sample_n(rate_stream, static_cast<std::size_t>(config.n));
  }
  per_server_ = config.construction == Construction::per_server_timers;
  arrivals_ = config.seed.substream(StreamComponent::arrivals);
  potential_ = config.seed.substream(StreamComponent::potential);
  splitting_ = config.seed.substream(StreamComponent::splitting);
  patience_ = config.seed.substream(StreamComponent::patience);
  routing_ = config.seed.substream(StreamComponent::routing);
  service_ = config.seed.substream(StreamComponent::service);

  const auto n = static_cast<std::size_t>(config.n);
  traj_.config = std::move(config);
  const SystemConfig& cfg = traj_.config;

  idle_.assign(n, 0);
  idle_since_.assign(n, 0.0);
  idle_accum_.assign(n, 0.0);
  open_episode_.assign(n, 0);
  pool_ = IdlePool(n);

  rate_prefix_.resize(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += cfg.rates[k];
    rate_prefix_[k] = acc;
  }
  total_rate_ = acc;

  grid_times_ = sampling_grid(cfg.horizon, cfg.effective_grid_spacing());

  headcount_ = cfg.x0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto server = static_cast<ServerIndex>(k);
    if (initially_busy(cfg, server)) {
      if (per_server_) start_service(server);
    } else {
      idle_[k] = 1;
      idle_since_[k] = 0.0;
      open_episode_[k] = traj_.idle_episodes.size();
      traj_.idle_episodes.push_back({server, cfg.rates[k], 0.0, 0.0, true, false});
      pool_.add(server, cfg.rates[k], 0.0);
    }
  }
  for (std::int64_t j = cfg.n; j < cfg.x0; ++j) enqueue_customer();

  if (cfg.lambda > 0.0) {
    push(cfg.arrival_law.sample(arrivals_) / cfg.lambda, Pending::arrival, -1);
  }
  if (!per_server_) {
    push(potential_.exponential(total_rate_), Pending::potential, -1);
  }
  check_invariants();
}

void Simulator::push(double time, Pending type, std::int64_t payload) {
  int priority = kPriorityCompletion;
  if (type == Pending::arrival) priority = kPriorityArrival;
  if (type == Pending::patience) priority = kPriorityAbandonment;
  events_.push({time, priority, seq_++, type, payload});
}

void Simulator::record(EventKind kind, ServerIndex server) {
  traj_.events.push_back({clock_, kind, server, headcount_});
}

void Simulator::emit_grid_before(double t) {
  while (next_grid_ < grid_times_.size() && grid_times_[next_grid_] < t) {
    traj_.grid.push_back({grid_times_[next_grid_], headcount_,
                          static_cast<std::int64_t>(pool_.size())});
    ++next_grid_;
  }
}

void Simulator::emit_grid_through(double t) {
  while (next_grid_ < grid_times_.size() && grid_times_[next_grid_] <= t) {
    traj_.grid.push_back({grid_times_[next_grid_], headcount_,
                          static_cast<std::int64_t>(pool_.size())});
    ++next_grid_;
  }
}

double Simulator::cumulative_idle(ServerIndex k) const {
  const auto i = static_cast<std::size_t>(k);
  return idle_accum_[i] + (idle_[i] ? clock_ - idle_since_[i] : 0.0);
}

ServerIndex Simulator::split(double u) const {
  const double target = total_rate_ * u;
  auto it = std::lower_bound(rate_prefix_.begin(), rate_prefix_.end(), target);
  if (it == rate_prefix_.end()) --it;
  return static_cast<ServerIndex>(it - rate_prefix_.begin());
}

void Simulator::make_busy(ServerIndex k) {
  const auto i = static_cast<std::size_t>(k);
  pool_.remove(k);
  idle_[i] = 0;
  idle_accum_[i] += clock_ - idle_since_[i];
  traj_.idle_episodes[open_episode_[i]].end = clock_;
}

void Simulator::make_idle(ServerIndex k) {
  const auto i = static_cast<std::size_t>(k);
  idle_[i] = 1;
  idle_since_[i] = clock_;
  open_episode_[i] = traj_.idle_episodes.size();
  traj_.idle_episodes.push_back({k, traj_.config.rates[i], clock_, clock_, false, false});
  pool_.add(k, traj_.config.rates[i], clock_);
}

void Simulator::start_service(ServerIndex k) {
  if (per_server_) {
    push(clock_ + service_.exponential(traj_.config.rates[static_cast<std::size_t>(k)]),
         Pending::service_done, k);
  }
}

void Simulator::enqueue_customer() {
  const auto id = static_cast<std::int64_t>(customer_state_.size());
  customer_state_.push_back(kWaiting);
  queue_.push_back(id);
  ++queue_length_;
  if (traj_.config.gamma > 0.0) {
    push(clock_ + patience_.exponential(traj_.config.gamma), Pending::patience, id);
  }
}

void Simulator::handle_arrival() {
  ++headcount_;
  record(EventKind::arrival, -1);
  if (!pool_.empty()) {
    const ServerIndex k = select_server(traj_.config.policy, pool_, routing_);
    make_busy(k);
    record(EventKind::routing, k);
    start_service(k);
  } else {
    enqueue_customer();
  }
  push(clock_ + traj_.config.arrival_law.sample(arrivals_) / traj_.config.lambda,
       Pending::arrival, -1);
}

void Simulator::handle_completion(ServerIndex k) {
  --headcount_;
  record(EventKind::completion, k);
  if (queue_length_ > 0) {
    while (customer_state_[static_cast<std::size_t>(queue_.front())] != kWaiting) {
      queue_.pop_front();
    }
    customer_state_[static_cast<std::size_t>(queue_.front())] = kServed;
    queue_.pop_front();
    --queue_length_;
    record(EventKind::routing, k);
    start_service(k);
  } else {
    make_idle(k);
  }
}

void Simulator::handle_potential() {
  const ServerIndex k = split(splitting_.uniform_open());
  if (idle_[static_cast<std::size_t>(k)]) {
    record(EventKind::potential_no_op, k);
  } else {
    handle_completion(k);
  }
  push(clock_ + potential_.exponential(total_rate_), Pending::potential, -1);
}

bool Simulator::handle_patience(std::int64_t customer) {
  auto& state = customer_state_[static_cast<std::size_t>(customer)];
  if (state != kWaiting) return false;
  state = kAbandoned;
  --queue_length_;
  --headcount_;
  record(EventKind::abandonment, -1);
  return true;
}

void Simulator::check_invariants() const {
  const std::int64_t n = traj_.config.n;
  const auto idle = static_cast<std::int64_t>(pool_.size());
  const auto queued = static_cast<std::int64_t>(queue_length_);
  if (idle != std::max<std::int64_t>(n - headcount_, 0) ||
      queued != std::max<std::int64_t>(headcount_ - n, 0)) {
    throw std::logic_error("Simulator: non-idling identity violated");
  }
}

std::optional<EventRecord> Simulator::step() {
  while (!events_.empty() && events_.top().time <= traj_.config.horizon) {
    const QueuedEvent ev = events_.top();
    events_.pop();
    emit_grid_before(ev.time);
    clock_ = ev.time;
    const std::size_t before = traj_.events.size();
    switch (ev.type) {
      case Pending::arrival:
        handle_arrival();
        break;
      case Pending::potential:
        handle_potential();
        break;
      case Pending::service_done:
        handle_completion(static_cast<ServerIndex>(ev.payload));
        break;
      case Pending::patience:
        if (!handle_patience(ev.payload)) continue;
        break;
    }
    check_invariants();
    return traj_.events[before];
  }
  return std::nullopt;
}

Trajectory Simulator::finish() && {
  while (step()) {
  }
  const double horizon = traj_.config.horizon;
  clock_ = horizon;
  emit_grid_through(horizon);
  for (std::size_t k = 0; k < idle_.size(); ++k) {
    if (idle_[k]) {
      auto& ep = traj_.idle_episodes[open_episode_[k]];
      ep.end = horizon;
      ep.open = true;
    }
  }
  traj_.cumulative_idle.resize(idle_.size());
  for (std::size_t k = 0; k < idle_.size(); ++k) {
    traj_.cumulative_idle[k] = cumulative_idle(static_cast<ServerIndex>(k));
  }
  return std::move(traj_);
}

Trajectory simulate(const SystemConfig& config) {
  SystemConfig cfg = config;
  cfg.construction = Construction::potential_stream;
  return Simulator(std::move(cfg)).finish();
}

Trajectory simulate_per_server(const SystemConfig& config) {
  SystemConfig cfg = config;
  cfg.construction = Construction::per_server_timers;
  return Simulator(std::move(cfg)).finish();
}

Trajectory run_system(const SystemConfig& config) { return Simulator(config).finish(); }

}  // namespace hwsim
