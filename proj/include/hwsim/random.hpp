#pragma once

#include <array>
#include <cstdint>

namespace hwsim {

/// Labels for the independent stochastic ingredients of one replication.
/// Each label owns a disjoint slice of the counter space of its stream.
enum class StreamComponent : std::uint8_t {
  root = 0,
  arrivals = 1,
  potential = 2,
  splitting = 3,
  patience = 4,
  routing = 5,
  service = 6,
  rates = 7,
  beta = 8,
  brownian = 9,
};

/// Counter-based Philox4x32-10 block function. Exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Inverse CDF of Exp(rate) at u in [0, 1).
double exponential_quantile(double u, double rate);

/// Deterministic random stream keyed by (seed, stream_id, component).
///
/// The 64-bit seed is the Philox key. The 128-bit counter holds the stream id
/// in its upper half; the lower half holds the block index (56 bits) and the
/// component label (8 bits). Streams with different (stream_id, component)
/// therefore never share a counter value.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint64_t stream_id,
            StreamComponent component = StreamComponent::root)
      : seed_(seed), stream_id_(stream_id), component_(component) {}

  /// Fresh stream for one ingredient of the same replication.
  [[nodiscard]] RngStream substream(StreamComponent component) const {
    return RngStream(seed_, stream_id_, component);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  StreamComponent component() const { return component_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Exp(rate) by inverse CDF; rate must be positive.
  double exponential(double rate);
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound);

  friend bool operator==(const RngStream& a, const RngStream& b) {
    return a.seed_ == b.seed_ && a.stream_id_ == b.stream_id_ &&
           a.component_ == b.component_;
  }

 private:
  void refill();

  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  StreamComponent component_ = StreamComponent::root;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;  // number of unused 64-bit halves in buffer_
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace hwsim
