#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hwsim/random.hpp"

namespace hwsim {

using ServerIndex = std::int32_t;

enum class Policy { FSF, SSF, LISF, RANDOM_IDLE };

const char* to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view name);

/// True for policies whose choice cannot depend on service rates.
bool is_totally_blind(Policy policy);

/// What a rate-aware selector sees about an idle server.
struct IdleServer {
  ServerIndex server;
  double rate;
  double idle_since;
};

/// What a blind selector sees: no rate field exists.
struct BlindIdleServer {
  ServerIndex server;
  double idle_since;
};

// Ties go to the lowest server index in every deterministic selector.
ServerIndex select_fastest(std::span<const IdleServer> idle);
ServerIndex select_slowest(std::span<const IdleServer> idle);
ServerIndex select_longest_idle(std::span<const BlindIdleServer> idle);
ServerIndex select_random_idle(std::span<const BlindIdleServer> idle, RngStream& rng);

/// Idle servers in insertion order, kept in both an informed and a blind view.
/// Removal swaps the last entry into the vacated slot.
class IdlePool {
 public:
  explicit IdlePool(std::size_t servers = 0) : slot_(servers, -1) {}

  void add(ServerIndex server, double rate, double idle_since);
  void remove(ServerIndex server);
  bool contains(ServerIndex server) const { return slot_[static_cast<std::size_t>(server)] >= 0; }
  std::size_t size() const { return informed_.size(); }
  bool empty() const { return informed_.empty(); }

  std::span<const IdleServer> informed() const { return informed_; }
  std::span<const BlindIdleServer> blind() const { return blind_; }

 private:
  std::vector<IdleServer> informed_;
  std::vector<BlindIdleServer> blind_;
  std::vector<std::int32_t> slot_;
};

/// Dispatches to the policy's selector. Blind policies only receive the blind
/// view. `idle` must be nonempty.
ServerIndex select_server(Policy policy, const IdlePool& idle, RngStream& rng);
ServerIndex select_server(Policy policy, std::span<const IdleServer> idle, RngStream& rng);

}  // namespace hwsim
