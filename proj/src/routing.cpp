#include "hwsim/routing.hpp"

#include <stdexcept>

namespace hwsim {

const char* to_string(Policy policy) {
  switch (policy) {
    case Policy::FSF:
      return "FSF";
    case Policy::SSF:
      return "SSF";
    case Policy::LISF:
      return "LISF";
    case Policy::RANDOM_IDLE:
      return "RANDOM_IDLE";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view name) {
  for (Policy p : {Policy::FSF, Policy::SSF, Policy::LISF, Policy::RANDOM_IDLE}) {
    if (name == to_string(p)) return p;
  }
  return std::nullopt;
}

bool is_totally_blind(Policy policy) {
  return policy == Policy::LISF || policy == Policy::RANDOM_IDLE;
}

namespace {

void require_nonempty(std::size_t size) {
  if (size == 0) throw std::logic_error("select_server: idle set is empty");
}

}  // namespace

ServerIndex select_fastest(std::span<const IdleServer> idle) {
  require_nonempty(idle.size());
  const IdleServer* best = &idle.front();
  for (const auto& s : idle) {
    if (s.rate > best->rate || (s.rate == best->rate && s.server < best->server)) best = &s;
  }
  return best->server;
}

ServerIndex select_slowest(std::span<const IdleServer> idle) {
  require_nonempty(idle.size());
  const IdleServer* best = &idle.front();
  for (const auto& s : idle) {
    if (s.rate < best->rate || (s.rate == best->rate && s.server < best->server)) best = &s;
  }
  return best->server;
}

ServerIndex select_longest_idle(std::span<const BlindIdleServer> idle) {
  require_nonempty(idle.size());
  const BlindIdleServer* best = &idle.front();
  for (const auto& s : idle) {
    if (s.idle_since < best->idle_since ||
        (s.idle_since == best->idle_since && s.server < best->server)) {
      best = &s;
    }
  }
  return best->server;
}

ServerIndex select_random_idle(std::span<const BlindIdleServer> idle, RngStream& rng) {
  require_nonempty(idle.size());
  return idle[rng.below(idle.size())].server;
}

void IdlePool::add(ServerIndex server, double rate, double idle_since) {
  auto& slot = slot_[static_cast<std::size_t>(server)];
  if (slot >= 0) throw std::logic_error("IdlePool: server already idle");
  slot = static_cast<std::int32_t>(informed_.size());
  informed_.push_back({server, rate, idle_since});
  blind_.push_back({server, idle_since});
}

void IdlePool::remove(ServerIndex server) {
  auto& slot = slot_[static_cast<std::size_t>(server)];
  if (slot < 0) throw std::logic_error("IdlePool: server not idle");
  const auto pos = static_cast<std::size_t>(slot);
  const std::size_t last = informed_.size() - 1;
  if (pos != last) {
    informed_[pos] = informed_[last];
    blind_[pos] = blind_[last];
    slot_[static_cast<std::size_t>(informed_[pos].server)] = static_cast<std::int32_t>(pos);
  }
  informed_.pop_back();
  blind_.pop_back();
  slot = -1;
}

ServerIndex select_server(Policy policy, const IdlePool& idle, RngStream& rng) {
  switch (policy) {
    case Policy::FSF:
      return select_fastest(idle.informed());
    case Policy::SSF:
      return select_slowest(idle.informed());
    case Policy::LISF:
      return select_longest_idle(idle.blind());
    case Policy::RANDOM_IDLE:
      return select_random_idle(idle.blind(), rng);
  }
  throw std::logic_error("select_server: unknown policy");
}

ServerIndex select_server(Policy policy, std::span<const IdleServer> idle, RngStream& rng) {
  switch (policy) {
    case Policy::FSF:
      return select_fastest(idle);
    case Policy::SSF:
      return select_slowest(idle);
    case Policy::LISF:
    case Policy::RANDOM_IDLE: {
      std::vector<BlindIdleServer> blind;
      blind.reserve(idle.size());
      for (const auto& s : idle) blind.push_back({s.server, s.idle_since});
      return policy == Policy::LISF ? select_longest_idle(blind)
                                    : select_random_idle(blind, rng);
    }
  }
  throw std::logic_error("select_server: unknown policy");
}

}  // namespace hwsim
