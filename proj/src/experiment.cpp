#include "hwsim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "hwsim/fairness.hpp"
#include "hwsim/martingale.hpp"
#include "hwsim/simulator.hpp"

namespace hwsim {

using nlohmann::json;
namespace fs = std::filesystem;

int resolve_workers(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw ValidationError("workers", "must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv(kWorkersEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 1 || value > 4096) {
      throw ValidationError(kWorkersEnv, "must be an integer in [1, 4096]");
    }
    return static_cast<int>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double wall_clock() {
  using namespace std::chrono;
  return duration<double>(system_clock::now().time_since_epoch()).count();
}

double limiting_mean(const ExperimentConfig& config) {
  if (config.sde.m) return *config.sde.m;
  return mean_of_measure(predicted_limit(config.policy(), config.rate_dist()));
}

SdeParams sde_template(const ExperimentConfig& config, int n) {
  const LadderSpec& s = config.ladder;
  const double root = std::sqrt(static_cast<double>(n));
  SdeParams p;
  p.xi0 = static_cast<double>(s.x0_for(n) - n) / root;
  p.mu_bar = s.rate_dist.mean();
  p.ca2 = s.arrival_law.ca2();
  p.m = limiting_mean(config);
  p.gamma = s.gamma;
  p.sigma = config.sde.sigma;
  p.horizon = s.horizon;
  p.dt = config.sde.dt > 0.0 ? config.sde.dt : s.horizon / 2000.0;
  if (s.horizon == 0.0) p.dt = 1.0;
  return p;
}

MatchedSde matched_sde(const ExperimentConfig& config, int n, int rep, std::span<const double> rates) {
  const LadderSpec& s = config.ladder;
  const std::uint64_t id = replication_stream_id(n, rep);
  RngStream beta_stream(s.base_seed, id, StreamComponent::beta);
  SdeParams p = sde_template(config, n);
  p.beta = sample_beta(s.lambda_hat, s.rate_dist, config.sde.beta_mode, rates, beta_stream);
  p.seed = RngStream(s.base_seed, id, StreamComponent::brownian);
  return {p.beta, integrate_terminal(p)};
}

std::vector<double> epsilons_for(const ExperimentConfig& config, int n) {
  std::vector<double> eps = config.epsilons;
  eps.push_back(1.0 / n);
  return eps;
}

namespace {

bool martingale_applicable(const SystemConfig& s) {
  return s.policy == Policy::LISF && s.arrival_law.kind() == InterarrivalLaw::Kind::exponential &&
         s.construction == Construction::potential_stream && s.lambda > 0.0;
}

std::string trajectory_stem(int n, int rep) {
  return "trajectories/n" + std::to_string(n) + "_rep" + std::to_string(rep);
}

struct RepOutput {
  ReplicationRecord record;
  ScaledPath scaled;
};

RepOutput run_replication(const ExperimentConfig& config, const SystemConfig& system, int rep,
                          const DiscreteMeasure& predicted, const DiscreteMeasure& zeta,
                          const std::optional<fs::path>& out_dir) {
  Trajectory traj = run_system(system);
  RepOutput out;
  ReplicationRecord& r = out.record;
  r.n = system.n;
  r.rep = rep;
  const double T = system.horizon;
  r.eta_terminal = fairness_measure(traj, T, zeta);
  r.eta_top = r.eta_terminal.mass(BorelSet::at_least(system.rate_dist.support_max()));
  r.mean_rate = mean_of_measure(r.eta_terminal);
  r.w1 = wasserstein1(r.eta_terminal, predicted);
  const IdlenessPath ipath = idleness_path(traj);
  r.tau0 = tau_epsilon(ipath, 0.0);
  for (double eps : epsilons_for(config, system.n)) r.tau_eps.push_back(tau_epsilon(ipath, eps));
  out.scaled = scale(traj);
  r.xhat_terminal = out.scaled.xhat_terminal;
  r.sup_ihat = out.scaled.sup_ihat;
  r.sup_ibar = out.scaled.sup_ibar;
  r.idle_effort = out.scaled.idle_effort;
  r.audit_violations = audit_trajectory(traj).total();
  if (martingale_applicable(system)) {
    const std::vector<double> last{T};
    const MartingaleTerms terms = lisf_martingale_terms(traj, last);
    r.martingale_fast = terms.residual(0, BorelSet::at_least(system.rate_dist.support_max()));
    r.martingale_all = terms.residual(0, BorelSet::nonnegative());
  }
  const MatchedSde sde = matched_sde(config, system.n, rep, traj.config.rates);
  r.beta = sde.beta;
  r.sde_terminal = sde.terminal;
  if (out_dir && rep < config.save_trajectories) {
    const fs::path stem = *out_dir / trajectory_stem(system.n, rep);
    write_trajectory_csv(traj, stem.string() + ".csv");
    write_trajectory_binary(traj, stem.string() + ".bin");
  }
  // Keep the grid-level path only as long as the report needs it.
  out.scaled.grid.clear();
  out.scaled.xhat.clear();
  out.scaled.ihat.clear();
  out.scaled.ibar.clear();
  return out;
}

Summary summarize_field(const std::vector<ReplicationRecord>& recs, double ReplicationRecord::*field) {
  std::vector<double> v;
  v.reserve(recs.size());
  for (const auto& r : recs) v.push_back(r.*field);
  return summarize(v);
}

}  // namespace

CompareReport run_compare(const ExperimentConfig& config, int workers, const std::optional<fs::path>& out_dir) {
  if (config.kind != ExperimentConfig::Kind::ladder) {
    throw ValidationError("lambda", "compare needs a ladder config (lambda_hat), not a single system");
  }
  CompareReport report;
  report.config = config;
  report.predicted = predicted_limit(config.ladder.policy, config.ladder.rate_dist);
  report.zeta = config.zeta ? *config.zeta : default_zeta(config.ladder.policy, config.ladder.rate_dist);
  report.m = limiting_mean(config);

  const std::vector<SystemConfig> systems = build_ladder(config.ladder);
  const int reps = config.ladder.reps;
  std::function<RepOutput(std::size_t)> task = [&](std::size_t i) {
    const SystemConfig& sys = systems[i];
    const int rep = static_cast<int>(i % static_cast<std::size_t>(reps));
    try {
      return run_replication(config, sys, rep, report.predicted, report.zeta, out_dir);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error("n=" + std::to_string(sys.n) + " rep=" + std::to_string(rep) + ": " + e.what());
    }
  };
  std::vector<RepOutput> outputs = parallel_map<RepOutput>(systems.size(), workers, task);

  std::map<int, std::vector<ScaledPath>> scaled;
  for (auto& o : outputs) {
    scaled[o.record.n].push_back(std::move(o.scaled));
    report.records.push_back(std::move(o.record));
  }
  report.scaling = idleness_scaling_report(scaled);

  for (int n : config.ladder.n_values) {
    std::vector<ReplicationRecord> level;
    for (const auto& r : report.records) {
      if (r.n == n) level.push_back(r);
    }
    LevelSummary s;
    s.n = n;
    std::vector<DiscreteMeasure> etas;
    std::vector<double> xs, ys, tau0;
    for (const auto& r : level) {
      etas.push_back(r.eta_terminal);
      xs.push_back(r.xhat_terminal);
      ys.push_back(r.sde_terminal);
      tau0.push_back(r.tau0);
    }
    s.mean_measure = average_measure(etas);
    s.w1_mean_measure = wasserstein1(s.mean_measure, report.predicted);
    s.w1 = summarize_field(level, &ReplicationRecord::w1);
    s.eta_top = summarize_field(level, &ReplicationRecord::eta_top);
    s.mean_rate = summarize_field(level, &ReplicationRecord::mean_rate);
    s.xhat = summarize(xs);
    s.sde = summarize(ys);
    s.ks = ks_distance(xs, ys);
    s.tau0_median = quantile(tau0, 0.5);
    s.epsilons = epsilons_for(config, n);
    for (std::size_t e = 0; e < s.epsilons.size(); ++e) {
      std::vector<double> t;
      for (const auto& r : level) t.push_back(r.tau_eps[e]);
      s.tau_eps_median.push_back(quantile(t, 0.5));
    }
    for (const auto& r : level) s.audit_violations += r.audit_violations;
    if (!level.empty() && !std::isnan(level.front().martingale_fast)) {
      s.martingale_fast = summarize_field(level, &ReplicationRecord::martingale_fast);
      s.martingale_all = summarize_field(level, &ReplicationRecord::martingale_all);
    }
    report.levels.push_back(std::move(s));
  }

  const LevelSummary& top = report.levels.back();
  std::ostringstream msg;
  msg << "n=" << top.n << " W1(mean terminal measure, predicted)=" << format_double(top.w1_mean_measure)
      << " tolerance " << format_double(config.check.w1);
  const bool w1_ok = top.w1_mean_measure <= config.check.w1;
  report.check_messages.push_back((w1_ok ? "PASS " : "FAIL ") + msg.str());
  msg.str("");
  msg << "n=" << top.n << " KS(xhat(T), matched SDE)=" << format_double(top.ks) << " tolerance "
      << format_double(config.check.ks);
  const bool ks_ok = top.ks <= config.check.ks;
  report.check_messages.push_back((ks_ok ? "PASS " : "FAIL ") + msg.str());
  report.check_passed = w1_ok && ks_ok;
  return report;
}

json summary_json(const CompareReport& report) {
  json levels = json::array();
  for (const LevelSummary& s : report.levels) {
    json eps = json::array();
    for (std::size_t e = 0; e < s.epsilons.size(); ++e) {
      eps.push_back({{"epsilon", s.epsilons[e]}, {"tau_median", s.tau_eps_median[e]}});
    }
    levels.push_back({
        {"n", s.n},
        {"reps", s.xhat.count},
        {"w1_mean_measure", s.w1_mean_measure},
        {"w1_median", s.w1.median},
        {"eta_top_mean", s.eta_top.mean},
        {"eta_top_se", s.eta_top.standard_error},
        {"mean_rate_mean", s.mean_rate.mean},
        {"mean_rate_se", s.mean_rate.standard_error},
        {"xhat_terminal_mean", s.xhat.mean},
        {"xhat_terminal_sd", s.xhat.sd},
        {"sde_terminal_mean", s.sde.mean},
        {"sde_terminal_sd", s.sde.sd},
        {"ks", s.ks},
        {"tau0_median", s.tau0_median},
        {"tau_epsilon", eps},
        {"audit_violations", s.audit_violations},
        {"martingale_fast_mean", s.martingale_fast ? json(s.martingale_fast->mean) : json(nullptr)},
        {"martingale_fast_se", s.martingale_fast ? json(s.martingale_fast->standard_error) : json(nullptr)},
        {"martingale_all_mean", s.martingale_all ? json(s.martingale_all->mean) : json(nullptr)},
        {"martingale_all_se", s.martingale_all ? json(s.martingale_all->standard_error) : json(nullptr)},
        {"mean_terminal_measure", to_json(s.mean_measure)},
    });
  }
  json ratios = json::array();
  for (const auto& r : report.scaling.ratios) {
    ratios.push_back({{"n_small", r.n_small},
                      {"n_large", r.n_large},
                      {"sup_ihat_ratio", r.sup_ihat_ratio},
                      {"sup_ibar_ratio", r.sup_ibar_ratio},
                      {"sup_ibar_predicted", r.sup_ibar_predicted},
                      {"idle_effort_ratio", r.idle_effort_ratio}});
  }
  return {
      {"policy", to_string(report.config.ladder.policy)},
      {"predicted_limit", to_json(report.predicted)},
      {"zeta", to_json(report.zeta)},
      {"sde_m", report.m},
      {"levels", levels},
      {"scaling_ratios", ratios},
      {"warnings", report.scaling.warnings},
      {"check", {{"passed", report.check_passed}, {"messages", report.check_messages}}},
  };
}

void write_compare_outputs(const CompareReport& report, const fs::path& out_dir, double started,
                           double finished) {
  fs::create_directories(out_dir);

  std::string reps = csv_preamble(
      "replications",
      "n,rep,xhat_terminal,beta,sde_terminal,eta_top,mean_rate,w1,tau0,sup_ihat,sup_ibar,idle_effort,"
      "audit_violations");
  std::string terminal = csv_preamble("fairness_terminal", "n,rep,location,weight");
  for (const ReplicationRecord& r : report.records) {
    reps += std::to_string(r.n) + ',' + std::to_string(r.rep) + ',' + format_double(r.xhat_terminal) + ',' +
            format_double(r.beta) + ',' + format_double(r.sde_terminal) + ',' + format_double(r.eta_top) + ',' +
            format_double(r.mean_rate) + ',' + format_double(r.w1) + ',' + format_double(r.tau0) + ',' +
            format_double(r.sup_ihat) + ',' + format_double(r.sup_ibar) + ',' + format_double(r.idle_effort) +
            ',' + std::to_string(r.audit_violations) + '\n';
    for (const Atom& a : r.eta_terminal.atoms()) {
      terminal += std::to_string(r.n) + ',' + std::to_string(r.rep) + ',' + format_double(a.location) + ',' +
                  format_double(a.weight) + '\n';
    }
  }
  write_text(out_dir / "replications.csv", reps);
  write_text(out_dir / "fairness_terminal.csv", terminal);

  std::string levels = csv_preamble("fairness_levels", "n,measure,location,weight");
  std::string ks = csv_preamble("ks_table", "n,statistic,n1,n2,xhat_mean,xhat_sd,sde_mean,sde_sd");
  std::string tau = csv_preamble("tau_epsilon", "n,epsilon,tau_median");
  std::string w1 = csv_preamble("fairness_w1", "n,w1_mean_measure,w1_median,eta_top_mean,mean_rate_mean");
  for (const LevelSummary& s : report.levels) {
    const std::string n = std::to_string(s.n);
    for (const Atom& a : s.mean_measure.atoms()) {
      levels += n + ",mean_terminal," + format_double(a.location) + ',' + format_double(a.weight) + '\n';
    }
    for (const Atom& a : report.predicted.atoms()) {
      levels += n + ",predicted," + format_double(a.location) + ',' + format_double(a.weight) + '\n';
    }
    ks += n + ',' + format_double(s.ks) + ',' + std::to_string(s.xhat.count) + ',' + std::to_string(s.sde.count) +
          ',' + format_double(s.xhat.mean) +
          ',' + format_double(s.xhat.sd) + ',' + format_double(s.sde.mean) + ',' + format_double(s.sde.sd) + '\n';
    for (std::size_t e = 0; e < s.epsilons.size(); ++e) {
      tau += n + ',' + format_double(s.epsilons[e]) + ',' + format_double(s.tau_eps_median[e]) + '\n';
    }
    w1 += n + ',' + format_double(s.w1_mean_measure) + ',' + format_double(s.w1.median) + ',' +
          format_double(s.eta_top.mean) + ',' + format_double(s.mean_rate.mean) + '\n';
  }
  write_text(out_dir / "fairness_levels.csv", levels);
  write_text(out_dir / "ks_table.csv", ks);
  write_text(out_dir / "tau_epsilon.csv", tau);
  write_text(out_dir / "fairness_w1.csv", w1);

  std::string ladder = csv_preamble("ladder_report", "n,statistic,median,q25,q75,reps");
  for (const LadderRow& r : report.scaling.rows) {
    ladder += std::to_string(r.n) + ',' + r.statistic + ',' + format_double(r.median) + ',' + format_double(r.q25) +
              ',' + format_double(r.q75) + ',' + std::to_string(r.reps) + '\n';
  }
  write_text(out_dir / "ladder_report.csv", ladder);

  const json summary = summary_json(report);
  write_text(out_dir / "summary.json", summary.dump(2) + "\n");
  write_manifest(out_dir, to_json(report.config), summary, started, finished);
}

namespace {

void flatten_numbers(const json& node, const std::string& prefix, json& out) {
  if (node.is_number() || node.is_boolean()) {
    out[prefix] = node;
  } else if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      flatten_numbers(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      flatten_numbers(node[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  }
}

}  // namespace

json write_manifest(const fs::path& out_dir, const json& config, const json& summary, double started,
                    double finished) {
  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), out_dir).generic_string();
    if (rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  json flat = json::object();
  flatten_numbers(summary, "", flat);
  json outputs = json::array();
  for (const auto& rel : files) {
    outputs.push_back({{"path", rel}, {"sha256", sha256_file(out_dir / rel)}, {"bytes", fs::file_size(out_dir / rel)}});
  }
  json manifest = {
      {"tool_version", kToolVersion},
      {"config", config},
      {"config_digest", sha256_hex(config.dump())},
      {"base_seed", config.value("seed", json(nullptr))},
      {"outputs", outputs},
      {"summary_metrics", flat},
  };
  manifest["manifest_digest"] = sha256_hex(manifest.dump());
  manifest["timing"] = {{"started", started}, {"finished", finished}, {"elapsed_seconds", finished - started}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

std::vector<std::string> verify_manifest(const fs::path& out_dir) {
  const json manifest = json::parse(read_text(out_dir / "manifest.json"));
  std::vector<std::string> bad;
  for (const json& o : manifest.at("outputs")) {
    const fs::path p = out_dir / o.at("path").get<std::string>();
    if (!fs::exists(p) || sha256_file(p) != o.at("sha256").get<std::string>()) {
      bad.push_back(o.at("path").get<std::string>());
    }
  }
  json core = manifest;
  core.erase("timing");
  core.erase("manifest_digest");
  if (sha256_hex(core.dump()) != manifest.at("manifest_digest").get<std::string>()) bad.push_back("manifest.json");
  return bad;
}

}  // namespace hwsim
