// Command-line front end: simulate, ladder, fairness, sde, compare.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "hwsim/experiment.hpp"
#include "hwsim/fairness.hpp"
#include "hwsim/io.hpp"
#include "hwsim/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hwsim;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCheckFailed = 3;

int cmd_simulate(const fs::path& config_path, const fs::path& out) {
  const double started = wall_clock();
  const ExperimentConfig cfg = parse_config_file(config_path);
  const SystemConfig sys = first_system(cfg);
  const Trajectory traj = run_system(sys);
  const TrajectoryAudit audit = audit_trajectory(traj);

  fs::create_directories(out);
  write_trajectory_csv(traj, out / "trajectory.csv");
  write_trajectory_binary(traj, out / "trajectory.bin");

  std::string grid = csv_preamble("grid", "time,headcount,idle,xhat");
  const double root = std::sqrt(static_cast<double>(sys.n));
  for (const GridSample& g : traj.grid) {
    grid += format_double(g.time) + ',' + std::to_string(g.headcount) + ',' + std::to_string(g.idle) + ',' +
            format_double(static_cast<double>(g.headcount - sys.n) / root) + '\n';
  }
  write_text(out / "grid.csv", grid);

  std::string episodes = csv_preamble("idle_episodes", "server,rate,start,end,initial,open");
  for (const IdleEpisode& e : traj.idle_episodes) {
    episodes += std::to_string(e.server) + ',' + format_double(e.rate) + ',' + format_double(e.start) + ',' +
                format_double(e.end) + ',' + (e.initial ? "1" : "0") + ',' + (e.open ? "1" : "0") + '\n';
  }
  write_text(out / "idle_episodes.csv", episodes);

  const json summary = {
      {"n", sys.n},
      {"lambda", sys.lambda},
      {"events", traj.events.size()},
      {"final_headcount", traj.final_headcount()},
      {"audit_violations", audit.total()},
      {"checked_epochs", audit.checked_epochs},
  };
  write_text(out / "summary.json", summary.dump(2) + "\n");
  json resolved = to_json(cfg);
  resolved["resolved_system"] = to_json(traj.config);
  write_manifest(out, resolved, summary, started, wall_clock());
  std::cout << "simulated n=" << sys.n << " events=" << traj.events.size()
            << " X(T)=" << traj.final_headcount() << " audit_violations=" << audit.total() << "\n";
  return 0;
}

int cmd_ladder(const fs::path& config_path, const fs::path& out, int workers) {
  const double started = wall_clock();
  const ExperimentConfig cfg = parse_config_file(config_path);
  if (cfg.kind != ExperimentConfig::Kind::ladder) {
    throw ValidationError("lambda", "ladder needs lambda_hat, not a single-system lambda");
  }
  const std::vector<SystemConfig> systems = build_ladder(cfg.ladder);
  struct Row {
    ScaledPath path;
    std::size_t violations;
  };
  std::function<Row(std::size_t)> task = [&](std::size_t i) {
    const Trajectory traj = run_system(systems[i]);
    ScaledPath p = scale(traj);
    return Row{std::move(p), audit_trajectory(traj).total()};
  };
  std::vector<Row> rows = parallel_map<Row>(systems.size(), workers, task);

  std::map<int, std::vector<ScaledPath>> by_n;
  std::string reps = csv_preamble(
      "ladder_replications", "n,rep,sup_ihat,sup_ibar,idle_effort,xhat_terminal,audit_violations");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ScaledPath& p = rows[i].path;
    reps += std::to_string(p.n) + ',' + std::to_string(i % static_cast<std::size_t>(cfg.ladder.reps)) + ',' +
            format_double(p.sup_ihat) + ',' + format_double(p.sup_ibar) + ',' + format_double(p.idle_effort) + ',' +
            format_double(p.xhat_terminal) + ',' + std::to_string(rows[i].violations) + '\n';
    by_n[p.n].push_back(p);
  }
  const IdlenessScalingReport report = idleness_scaling_report(by_n);
  write_text(out / "ladder_replications.csv", reps);

  std::string table = csv_preamble("ladder_report", "n,statistic,median,q25,q75,reps");
  for (const LadderRow& r : report.rows) {
    table += std::to_string(r.n) + ',' + r.statistic + ',' + format_double(r.median) + ',' + format_double(r.q25) +
             ',' + format_double(r.q75) + ',' + std::to_string(r.reps) + '\n';
  }
  write_text(out / "ladder_report.csv", table);

  std::string ratios = csv_preamble(
      "ladder_ratios", "n_small,n_large,sup_ihat_ratio,sup_ibar_ratio,sup_ibar_predicted,idle_effort_ratio");
  for (const auto& r : report.ratios) {
    ratios += std::to_string(r.n_small) + ',' + std::to_string(r.n_large) + ',' + format_double(r.sup_ihat_ratio) +
              ',' + format_double(r.sup_ibar_ratio) + ',' + format_double(r.sup_ibar_predicted) + ',' +
              format_double(r.idle_effort_ratio) + '\n';
  }
  write_text(out / "ladder_ratios.csv", ratios);

  const json summary = {{"replications", rows.size()}, {"warnings", report.warnings}};
  write_text(out / "summary.json", summary.dump(2) + "\n");
  write_manifest(out, to_json(cfg), summary, started, wall_clock());
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "ladder: " << rows.size() << " replications written to " << out.string() << "\n";
  return 0;
}

int cmd_fairness(const fs::path& traj_path, const std::string& zeta_arg, const std::optional<fs::path>& out) {
  const Trajectory traj = read_trajectory(traj_path);
  const SystemConfig& sys = traj.config;
  DiscreteMeasure zeta;
  if (zeta_arg == "auto") {
    zeta = default_zeta(sys.policy, sys.rate_dist);
  } else {
    json doc;
    try {
      doc = json::parse(read_text(zeta_arg));
    } catch (const json::parse_error& e) {
      throw ValidationError("zeta", std::string("malformed JSON: ") + e.what());
    }
    json wrapped = {{"n", 1}, {"lambda_hat", 0}, {"rate_dist", {{"kind", "point"}, {"mu", 1}}},
                    {"horizon", 1}, {"zeta", doc}};
    zeta = *parse_config(wrapped).zeta;
  }
  const auto grid = sampling_grid(sys.horizon, sys.effective_grid_spacing());
  const FairnessPath path = fairness_path(traj, grid, zeta);
  const DiscreteMeasure predicted = predicted_limit(sys.policy, sys.rate_dist);

  std::string csv = csv_preamble("fairness_path", "time,location,weight");
  for (std::size_t j = 0; j < path.grid.size(); ++j) {
    for (const Atom& a : path.measures[j].atoms()) {
      csv += format_double(path.grid[j]) + ',' + format_double(a.location) + ',' + format_double(a.weight) + '\n';
    }
  }
  json taus = json::array();
  const double n = sys.n;
  for (double eps : {1.0, 0.5, 0.1, 1.0 / n}) {
    taus.push_back({{"epsilon", eps}, {"tau", tau_epsilon(traj, eps)}});
  }
  const DiscreteMeasure& terminal = path.measures.back();
  const json summary = {
      {"tau0", path.tau0},
      {"tau_epsilon", taus},
      {"terminal_measure", to_json(terminal)},
      {"predicted_limit", to_json(predicted)},
      {"w1_to_predicted", wasserstein1(terminal, predicted)},
      {"mean_rate", mean_of_measure(terminal)},
  };
  if (!out) {
    std::cout << csv;
    std::cerr << summary.dump(2) << "\n";
    return 0;
  }
  const double started = wall_clock();
  write_text(*out / "fairness_path.csv", csv);
  write_text(*out / "summary.json", summary.dump(2) + "\n");
  write_manifest(*out, {{"trajectory", traj_path.string()}, {"zeta", to_json(zeta)}}, summary, started, wall_clock());
  std::cout << "fairness path written to " << out->string() << "\n";
  return 0;
}

int cmd_sde(const fs::path& config_path, const std::optional<fs::path>& out, std::optional<int> paths_flag) {
  const double started = wall_clock();
  ExperimentConfig cfg = parse_config_file(config_path);
  if (cfg.kind != ExperimentConfig::Kind::ladder) {
    throw ValidationError("lambda", "sde needs lambda_hat, not a single-system lambda");
  }
  if (paths_flag) {
    if (*paths_flag < 1) throw ValidationError("paths", "must be >= 1");
    cfg.sde.paths = *paths_flag;
  }
  const int n = cfg.ladder.n_values.back();
  std::string csv = csv_preamble("sde_terminal", "path,beta,terminal");
  std::vector<double> terminals;
  for (int i = 0; i < cfg.sde.paths; ++i) {
    std::vector<double> rates;
    if (cfg.sde.beta_mode == BetaMode::from_rates) {
      RngStream rs(cfg.ladder.base_seed, replication_stream_id(n, i), StreamComponent::rates);
      rates = cfg.ladder.rate_dist.sample_n(rs, static_cast<std::size_t>(n));
    }
    const MatchedSde s = matched_sde(cfg, n, i, rates);
    terminals.push_back(s.terminal);
    csv += std::to_string(i) + ',' + format_double(s.beta) + ',' + format_double(s.terminal) + '\n';
  }
  const Summary sum = summarize(terminals);
  const SdeParams p = sde_template(cfg, n);
  const json summary = {
      {"paths", cfg.sde.paths},   {"n", n},           {"sigma", p.diffusion_coefficient()},
      {"m", p.m},                 {"dt", p.dt},       {"mean", sum.mean},
      {"sd", sum.sd},             {"q25", sum.q25},   {"median", sum.median},
      {"q75", sum.q75},
  };
  if (!out) {
    std::cout << summary.dump(2) << "\n";
    return 0;
  }
  write_text(*out / "sde_terminal.csv", csv);
  write_text(*out / "summary.json", summary.dump(2) + "\n");
  write_manifest(*out, to_json(cfg), summary, started, wall_clock());
  std::cout << "sde: " << cfg.sde.paths << " terminal values written to " << out->string() << "\n";
  return 0;
}

int cmd_compare(const fs::path& config_path, const fs::path& out, bool check, int workers) {
  const double started = wall_clock();
  const ExperimentConfig cfg = parse_config_file(config_path);
  fs::create_directories(out);
  const CompareReport report = run_compare(cfg, workers, out);
  write_compare_outputs(report, out, started, wall_clock());
  for (const LevelSummary& s : report.levels) {
    std::cout << "n=" << s.n << " W1=" << format_double(s.w1_mean_measure)
              << " eta_top=" << format_double(s.eta_top.mean) << " <iota,eta>=" << format_double(s.mean_rate.mean)
              << " KS=" << format_double(s.ks) << "\n";
  }
  for (const auto& w : report.scaling.warnings) std::cerr << "warning: " << w << "\n";
  if (check) {
    for (const auto& m : report.check_messages) std::cout << m << "\n";
    if (!report.check_passed) return kExitCheckFailed;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Many-server queue simulator with heterogeneous service rates"};
  app.require_subcommand(1);

  std::string config, out, traj, zeta = "auto";
  std::optional<int> workers, paths;
  bool check = false;

  auto* sim = app.add_subcommand("simulate", "Simulate one system and write its trajectory");
  sim->add_option("--config", config, "JSON config")->required();
  sim->add_option("--out", out, "Output directory")->required();

  auto* lad = app.add_subcommand("ladder", "Idleness scaling across a ladder of system sizes");
  lad->add_option("--config", config, "JSON config")->required();
  lad->add_option("--out", out, "Output directory")->required();
  lad->add_option("--workers", workers, std::string("Worker threads (default $") + kWorkersEnv + ")");

  auto* fair = app.add_subcommand("fairness", "Fairness process of a saved trajectory");
  fair->add_option("--traj", traj, "Trajectory file (.csv or .bin)")->required();
  fair->add_option("--zeta", zeta, "Placeholder measure: auto or a JSON file");
  fair->add_option("--out", out, "Output directory (default: CSV on stdout)");

  auto* sde = app.add_subcommand("sde", "Terminal law of the limiting diffusion");
  sde->add_option("--config", config, "JSON config")->required();
  sde->add_option("--out", out, "Output directory (default: summary on stdout)");
  sde->add_option("--paths", paths, "Number of paths (overrides sde.paths)");

  auto* cmp = app.add_subcommand("compare", "Simulation vs. limit comparison over a ladder");
  cmp->add_option("--config", config, "JSON config")->required();
  cmp->add_option("--out", out, "Output directory")->required();
  cmp->add_flag("--check", check, "Exit with status 3 when tolerances are exceeded");
  cmp->add_option("--workers", workers, std::string("Worker threads (default $") + kWorkersEnv + ")");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  const std::optional<fs::path> out_opt = out.empty() ? std::nullopt : std::optional<fs::path>(out);
  try {
    if (*sim) return cmd_simulate(config, out);
    if (*lad) return cmd_ladder(config, out, resolve_workers(workers));
    if (*fair) return cmd_fairness(traj, zeta, out_opt);
    if (*sde) return cmd_sde(config, out_opt, paths);
    if (*cmp) return cmd_compare(config, out, check, resolve_workers(workers));
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
