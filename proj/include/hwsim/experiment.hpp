#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hwsim/io.hpp"
#include "hwsim/ladder.hpp"
#include "hwsim/measure.hpp"
#include "hwsim/stats.hpp"

namespace hwsim {

inline constexpr const char* kWorkersEnv = "HWSIM_WORKERS";

/// Worker count: explicit flag, else $HWSIM_WORKERS, else hardware threads.
int resolve_workers(std::optional<int> flag);

/// Runs fn(i) for i in [0, count) on `workers` threads and returns the results
/// in index order. The first exception is rethrown after all workers stop.
template <typename Result>
std::vector<Result> parallel_map(std::size_t count, int workers,
                                 const std::function<Result(std::size_t)>& fn) {
  std::vector<std::optional<Result>> slots(count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Mean of the limiting fairness measure, used as the SDE coefficient m.
double limiting_mean(const ExperimentConfig& config);

/// SDE coefficients matched to ladder level n, without beta and seed.
SdeParams sde_template(const ExperimentConfig& config, int n);

/// Drift and terminal SDE value paired with replication `rep` at level n.
/// `rates` are the realized rates of that replication.
struct MatchedSde {
  double beta;
  double terminal;
};
MatchedSde matched_sde(const ExperimentConfig& config, int n, int rep, std::span<const double> rates);

struct ReplicationRecord {
  int n = 0;
  int rep = 0;
  double xhat_terminal = 0.0;
  double beta = 0.0;
  double sde_terminal = 0.0;
  DiscreteMeasure eta_terminal;
  double eta_top = 0.0;     // eta_T of the fastest support point
  double mean_rate = 0.0;   // <iota, eta_T>
  double w1 = 0.0;          // to the predicted limit
  double tau0 = 0.0;
  std::vector<double> tau_eps;  // per entry of epsilons_for(n)
  double sup_ihat = 0.0;
  double sup_ibar = 0.0;
  double idle_effort = 0.0;
  std::size_t audit_violations = 0;
  // Terminal LISF martingale residual for A = {fastest rate} and A = [0, inf);
  // NaN when the diagnostic does not apply.
  double martingale_fast = std::numeric_limits<double>::quiet_NaN();
  double martingale_all = std::numeric_limits<double>::quiet_NaN();
};

struct LevelSummary {
  int n = 0;
  DiscreteMeasure mean_measure;
  double w1_mean_measure = 0.0;
  Summary w1;
  Summary eta_top;
  Summary mean_rate;
  Summary xhat;
  Summary sde;
  double ks = 0.0;
  std::vector<double> epsilons;
  std::vector<double> tau_eps_median;
  double tau0_median = 0.0;
  std::size_t audit_violations = 0;
  std::optional<Summary> martingale_fast;
  std::optional<Summary> martingale_all;
};

struct CompareReport {
  ExperimentConfig config;
  DiscreteMeasure predicted;
  DiscreteMeasure zeta;
  double m = 0.0;
  std::vector<ReplicationRecord> records;  // ordered by n then rep
  std::vector<LevelSummary> levels;
  IdlenessScalingReport scaling;
  bool check_passed = true;
  std::vector<std::string> check_messages;
};

std::vector<double> epsilons_for(const ExperimentConfig& config, int n);

/// Simulates every replication of the ladder and assembles the comparison.
/// Trajectories of the first `save_trajectories` reps per level are written
/// below out_dir/trajectories when out_dir is given.
CompareReport run_compare(const ExperimentConfig& config, int workers,
                          const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Writes tables, summary.json and the manifest for a finished comparison.
void write_compare_outputs(const CompareReport& report, const std::filesystem::path& out_dir,
                           double started, double finished);

nlohmann::json summary_json(const CompareReport& report);

/// Writes out_dir/manifest.json listing every other file under out_dir with
/// its SHA-256. `manifest_digest` covers everything except `timing`.
nlohmann::json write_manifest(const std::filesystem::path& out_dir, const nlohmann::json& config,
                              const nlohmann::json& summary, double started, double finished);

/// Paths whose recorded digest no longer matches the file (or is missing).
std::vector<std::string> verify_manifest(const std::filesystem::path& out_dir);

/// Seconds since the epoch.
double wall_clock();

}  // namespace hwsim
