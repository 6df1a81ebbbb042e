#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hwsim/diffusion.hpp"
#include "hwsim/ladder.hpp"
#include "hwsim/measure.hpp"
#include "hwsim/system.hpp"
#include "hwsim/trajectory.hpp"

namespace hwsim {

inline constexpr const char* kToolVersion = "hwsim 1.0.0";
inline constexpr int kCsvSchemaVersion = 1;
inline constexpr int kBinarySchemaVersion = 1;

struct SdeOptions {
  double dt = 0.0;        // 0 means horizon / 2000
  int paths = 10000;      // for the standalone sde command
  std::optional<double> m;  // nullopt means the policy's limiting mean
  BetaMode beta_mode = BetaMode::from_rates;
  std::optional<double> sigma;  // nullopt means mu_bar * sqrt(ca2 + 1)

  friend bool operator==(const SdeOptions&, const SdeOptions&) = default;
};

struct CheckTolerances {
  double w1 = 0.05;
  double ks = 0.10;

  friend bool operator==(const CheckTolerances&, const CheckTolerances&) = default;
};

/// A parsed experiment file. `kind` says which of `ladder` / `system` is
/// meaningful: a file with "lambda" describes one system, otherwise a ladder.
struct ExperimentConfig {
  enum class Kind { ladder, system };
  Kind kind = Kind::ladder;
  LadderSpec ladder;
  SystemConfig system;
  std::optional<DiscreteMeasure> zeta;  // nullopt means the policy default
  std::vector<double> epsilons{1.0, 0.5, 0.1};  // 1/n is appended per level
  SdeOptions sde;
  CheckTolerances check;
  int save_trajectories = 1;

  Policy policy() const { return kind == Kind::ladder ? ladder.policy : system.policy; }
  const RateDistribution& rate_dist() const {
    return kind == Kind::ladder ? ladder.rate_dist : system.rate_dist;
  }
  double horizon() const { return kind == Kind::ladder ? ladder.horizon : system.horizon; }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Validates every key; unknown keys and schema violations throw
/// ValidationError naming the key path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Fully resolved form with every default written out.
nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const SystemConfig& config);
nlohmann::json to_json(const RateDistribution& dist);
nlohmann::json to_json(const InterarrivalLaw& law);
nlohmann::json to_json(const DiscreteMeasure& m);
SystemConfig system_config_from_json(const nlohmann::json& doc);

/// Single-system view of a config: the system itself, or replication 0 at
/// the first ladder level.
SystemConfig first_system(const ExperimentConfig& config);

// Trajectory files.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
void write_trajectory_binary(const Trajectory& traj, const std::filesystem::path& path);
Trajectory read_trajectory_csv(const std::filesystem::path& path);
Trajectory read_trajectory_binary(const std::filesystem::path& path);
/// Chooses the reader from the file contents.
Trajectory read_trajectory(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double x);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// CSV preamble: schema comment line followed by the header row.
std::string csv_preamble(std::string_view kind, std::string_view header);

}  // namespace hwsim
