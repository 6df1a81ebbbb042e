#include "hwsim/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hwsim/fairness.hpp"

namespace hwsim {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string join_key(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

/// Reads typed values out of one JSON object and remembers which keys were
/// consumed, so that leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) throw ValidationError(prefix_, "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ValidationError(path(key), "missing required key");
    used_.insert(key);
    return obj_.at(key);
  }

  double number(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number()) throw ValidationError(path(key), "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string& key) {
    const json& v = require(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
    }
    throw ValidationError(path(key), "expected an integer");
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    return has(key) ? integer(key) : fallback;
  }

  std::string string(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) throw ValidationError(path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ValidationError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string path(const std::string& key) const { return join_key(prefix_, key); }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) throw ValidationError(path(it.key()), "unknown key");
    }
  }

 private:
  const json& require(const std::string& key) { return raw(key); }

  const json& obj_;
  std::string prefix_;
  std::set<std::string> used_;
};

std::vector<std::pair<double, double>> parse_pairs(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) throw ValidationError(key, "expected a nonempty array of [location, weight]");
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& e = v[i];
    const std::string k = key + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ValidationError(k, "expected [location, weight]");
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

RateDistribution parse_rate_dist(const json& v, const std::string& prefix) {
  ObjectReader r(v, prefix);
  const std::string kind = r.string("kind");
  RateDistribution dist;
  if (kind == "point") {
    dist = RateDistribution::point(r.number("mu"));
  } else if (kind == "two_point") {
    dist = RateDistribution::two_point(r.number("mu1"), r.number("p1"), r.number("mu2"));
  } else if (kind == "uniform") {
    dist = RateDistribution::uniform(r.number("a"), r.number("b"));
  } else if (kind == "discrete") {
    dist = RateDistribution::discrete(parse_pairs(r.raw("atoms"), r.path("atoms")));
  } else {
    throw ValidationError(r.path("kind"), "unknown rate distribution '" + kind + "'");
  }
  r.finish();
  return dist;
}

InterarrivalLaw parse_arrival(const json& v, const std::string& prefix) {
  if (v.is_string()) return parse_arrival(json{{"kind", v}}, prefix);
  ObjectReader r(v, prefix);
  const std::string kind = r.string("kind");
  InterarrivalLaw law;
  if (kind == "exponential") {
    law = InterarrivalLaw::exponential();
  } else if (kind == "erlang") {
    law = InterarrivalLaw::erlang(static_cast<int>(r.integer("k")));
  } else if (kind == "hyperexponential") {
    law = InterarrivalLaw::hyperexponential(r.number("p"), r.number("r1"), r.number("r2"));
  } else if (kind == "deterministic") {
    law = InterarrivalLaw::deterministic();
  } else {
    throw ValidationError(r.path("kind"), "unknown interarrival law '" + kind + "'");
  }
  r.finish();
  return law;
}

Policy parse_policy_key(const std::string& text, const std::string& key) {
  if (const auto policy = parse_policy(text)) return *policy;
  throw ValidationError(key, "unknown policy '" + text + "' (FSF, SSF, LISF, RANDOM_IDLE)");
}

Construction parse_construction(const std::string& text, const std::string& key) {
  if (text == "potential_stream") return Construction::potential_stream;
  if (text == "per_server_timers") return Construction::per_server_timers;
  throw ValidationError(key, "unknown construction '" + text + "' (potential_stream, per_server_timers)");
}

std::uint64_t parse_seed(ObjectReader& r, const std::string& key, std::uint64_t fallback) {
  if (!r.has(key)) return fallback;
  const json& v = r.raw(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ValidationError(r.path(key), "expected a nonnegative integer");
}

DiscreteMeasure parse_measure(const json& v, const std::string& key) {
  const json* atoms = &v;
  if (v.is_object()) {
    ObjectReader r(v, key);
    atoms = &r.raw("atoms");
    r.finish();
  }
  std::vector<Atom> list;
  for (const auto& [loc, w] : parse_pairs(*atoms, key + ".atoms")) {
    if (!(loc >= 0.0) || !(w >= 0.0)) throw ValidationError(key, "locations and weights must be >= 0");
    list.push_back({loc, w});
  }
  DiscreteMeasure m(std::move(list));
  if (!m.is_probability(1e-9)) throw ValidationError(key, "weights must sum to 1");
  return m;
}

}  // namespace

json to_json(const RateDistribution& dist) {
  switch (dist.kind()) {
    case RateDistribution::Kind::point:
      return {{"kind", "point"}, {"mu", dist.atoms().front().first}};
    case RateDistribution::Kind::two_point: {
      const auto& a = dist.atoms();
      return {{"kind", "two_point"}, {"mu1", a[0].first}, {"p1", a[0].second}, {"mu2", a[1].first}};
    }
    case RateDistribution::Kind::uniform:
      return {{"kind", "uniform"}, {"a", dist.uniform_low()}, {"b", dist.uniform_high()}};
    case RateDistribution::Kind::discrete: {
      json atoms = json::array();
      for (const auto& [loc, p] : dist.atoms()) atoms.push_back({loc, p});
      return {{"kind", "discrete"}, {"atoms", atoms}};
    }
  }
  return {};
}

json to_json(const InterarrivalLaw& law) {
  switch (law.kind()) {
    case InterarrivalLaw::Kind::exponential:
      return {{"kind", "exponential"}};
    case InterarrivalLaw::Kind::erlang:
      return {{"kind", "erlang"}, {"k", law.erlang_k()}};
    case InterarrivalLaw::Kind::hyperexponential:
      return {{"kind", "hyperexponential"}, {"p", law.p()}, {"r1", law.r1()}, {"r2", law.r2()}};
    case InterarrivalLaw::Kind::deterministic:
      return {{"kind", "deterministic"}};
  }
  return {};
}

json to_json(const DiscreteMeasure& m) {
  json atoms = json::array();
  for (const Atom& a : m.atoms()) atoms.push_back({a.location, a.weight});
  return {{"atoms", atoms}};
}

json to_json(const SystemConfig& c) {
  return {
      {"n", c.n},
      {"lambda", c.lambda},
      {"arrival", to_json(c.arrival_law)},
      {"rate_dist", to_json(c.rate_dist)},
      {"rates", c.rates},
      {"gamma", c.gamma},
      {"x0", c.x0},
      {"horizon", c.horizon},
      {"policy", to_string(c.policy)},
      {"construction", to_string(c.construction)},
      {"seed", c.seed.seed()},
      {"stream_id", c.seed.stream_id()},
      {"grid_spacing", c.grid_spacing},
  };
}

namespace {

SystemConfig parse_system_fields(ObjectReader& r) {
  SystemConfig c;
  c.n = static_cast<int>(r.integer("n"));
  c.lambda = r.number("lambda");
  if (r.has("arrival")) c.arrival_law = parse_arrival(r.raw("arrival"), r.path("arrival"));
  c.rate_dist = parse_rate_dist(r.raw("rate_dist"), r.path("rate_dist"));
  if (r.has("rates")) {
    const json& v = r.raw("rates");
    if (!v.is_array()) throw ValidationError(r.path("rates"), "expected an array of numbers");
    for (const json& e : v) {
      if (!e.is_number()) throw ValidationError(r.path("rates"), "expected an array of numbers");
      c.rates.push_back(e.get<double>());
    }
  }
  c.gamma = r.number("gamma", 0.0);
  c.x0 = r.integer("x0", 0);
  c.horizon = r.number("horizon");
  c.policy = parse_policy_key(r.string("policy", "LISF"), r.path("policy"));
  c.construction = parse_construction(r.string("construction", "potential_stream"), r.path("construction"));
  const std::uint64_t seed = parse_seed(r, "seed", 1);
  const std::uint64_t stream = parse_seed(r, "stream_id", 0);
  c.seed = RngStream(seed, stream);
  c.grid_spacing = r.number("grid_spacing", 0.0);
  return c;
}

}  // namespace

SystemConfig system_config_from_json(const json& doc) {
  ObjectReader r(doc, "");
  SystemConfig c = parse_system_fields(r);
  r.finish();
  c.validate();
  return c;
}

ExperimentConfig parse_config(const json& doc) {
  ObjectReader r(doc, "");
  ExperimentConfig cfg;

  if (r.has("lambda")) {
    if (r.has("lambda_hat")) throw ValidationError("lambda_hat", "give either lambda or lambda_hat, not both");
    cfg.kind = ExperimentConfig::Kind::system;
    cfg.system = parse_system_fields(r);
    cfg.system.validate();
  } else {
    cfg.kind = ExperimentConfig::Kind::ladder;
    LadderSpec& s = cfg.ladder;
    if (r.has("n") && r.has("n_values")) throw ValidationError("n_values", "give either n or n_values, not both");
    if (r.has("n")) {
      s.n_values = {static_cast<int>(r.integer("n"))};
    } else if (r.has("n_values")) {
      const json& v = r.raw("n_values");
      if (!v.is_array() || v.empty()) throw ValidationError("n_values", "expected a nonempty array of integers");
      s.n_values.clear();
      for (const json& e : v) {
        if (!e.is_number_integer()) throw ValidationError("n_values", "expected a nonempty array of integers");
        s.n_values.push_back(e.get<int>());
      }
    }
    s.lambda_hat = r.number("lambda_hat");
    s.rate_dist = parse_rate_dist(r.raw("rate_dist"), "rate_dist");
    if (r.has("arrival")) s.arrival_law = parse_arrival(r.raw("arrival"), "arrival");
    s.gamma = r.number("gamma", 0.0);
    s.xi0 = r.number("xi0", 0.0);
    s.horizon = r.number("horizon");
    s.reps = static_cast<int>(r.integer("reps", 100));
    s.base_seed = parse_seed(r, "seed", 1);
    s.policy = parse_policy_key(r.string("policy", "LISF"), "policy");
    s.construction = parse_construction(r.string("construction", "potential_stream"), "construction");
    s.freeze_rates = r.boolean("freeze_rates", false);
    s.grid_spacing = r.number("grid_spacing", 0.0);
    s.validate();
  }

  if (r.has("zeta")) {
    const json& z = r.raw("zeta");
    if (!(z.is_string() && z.get<std::string>() == "auto")) cfg.zeta = parse_measure(z, "zeta");
  }
  if (r.has("epsilons")) {
    const json& v = r.raw("epsilons");
    if (!v.is_array()) throw ValidationError("epsilons", "expected an array of positive numbers");
    cfg.epsilons.clear();
    for (const json& e : v) {
      if (!e.is_number() || !(e.get<double>() > 0.0)) {
        throw ValidationError("epsilons", "expected an array of positive numbers");
      }
      cfg.epsilons.push_back(e.get<double>());
    }
  }
  if (r.has("sde")) {
    ObjectReader sr(r.raw("sde"), "sde");
    cfg.sde.dt = sr.number("dt", 0.0);
    if (cfg.sde.dt < 0.0) throw ValidationError("sde.dt", "must be >= 0 (0 selects horizon / 2000)");
    cfg.sde.paths = static_cast<int>(sr.integer("paths", 10000));
    if (cfg.sde.paths < 1) throw ValidationError("sde.paths", "must be >= 1");
    if (sr.has("m")) {
      const json& m = sr.raw("m");
      if (m.is_number()) {
        cfg.sde.m = m.get<double>();
        if (!(*cfg.sde.m >= 0.0)) throw ValidationError("sde.m", "must be >= 0");
      } else if (!(m.is_string() && m.get<std::string>() == "auto")) {
        throw ValidationError("sde.m", "expected a number or \"auto\"");
      }
    }
    if (sr.has("sigma")) {
      const json& v = sr.raw("sigma");
      if (v.is_number()) {
        cfg.sde.sigma = v.get<double>();
        if (!(*cfg.sde.sigma > 0.0)) throw ValidationError("sde.sigma", "must be positive");
      } else if (!(v.is_string() && v.get<std::string>() == "auto")) {
        throw ValidationError("sde.sigma", "expected a number or \"auto\"");
      }
    }
    const std::string mode = sr.string("beta_mode", "from_rates");
    if (mode == "from_rates") {
      cfg.sde.beta_mode = BetaMode::from_rates;
    } else if (mode == "unconditional") {
      cfg.sde.beta_mode = BetaMode::unconditional;
    } else {
      throw ValidationError("sde.beta_mode", "expected from_rates or unconditional");
    }
    sr.finish();
  }
  if (r.has("check")) {
    ObjectReader cr(r.raw("check"), "check");
    cfg.check.w1 = cr.number("w1", cfg.check.w1);
    cfg.check.ks = cr.number("ks", cfg.check.ks);
    if (!(cfg.check.w1 >= 0.0)) throw ValidationError("check.w1", "must be >= 0");
    if (!(cfg.check.ks >= 0.0)) throw ValidationError("check.ks", "must be >= 0");
    cr.finish();
  }
  cfg.save_trajectories = static_cast<int>(r.integer("save_trajectories", 1));
  if (cfg.save_trajectories < 0) throw ValidationError("save_trajectories", "must be >= 0");
  r.finish();
  return cfg;
}

ExperimentConfig parse_config_file(const fs::path& path) {
  if (!fs::exists(path)) throw ValidationError("config", "file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json out;
  if (cfg.kind == ExperimentConfig::Kind::system) {
    out = to_json(cfg.system);
  } else {
    const LadderSpec& s = cfg.ladder;
    out = {
        {"n_values", s.n_values},
        {"lambda_hat", s.lambda_hat},
        {"rate_dist", to_json(s.rate_dist)},
        {"arrival", to_json(s.arrival_law)},
        {"gamma", s.gamma},
        {"xi0", s.xi0},
        {"horizon", s.horizon},
        {"reps", s.reps},
        {"seed", s.base_seed},
        {"policy", to_string(s.policy)},
        {"construction", to_string(s.construction)},
        {"freeze_rates", s.freeze_rates},
        {"grid_spacing", s.grid_spacing},
    };
  }
  out["zeta"] = cfg.zeta ? to_json(*cfg.zeta) : json("auto");
  out["epsilons"] = cfg.epsilons;
  out["sde"] = {
      {"dt", cfg.sde.dt},
      {"paths", cfg.sde.paths},
      {"m", cfg.sde.m ? json(*cfg.sde.m) : json("auto")},
      {"sigma", cfg.sde.sigma ? json(*cfg.sde.sigma) : json("auto")},
      {"beta_mode", cfg.sde.beta_mode == BetaMode::from_rates ? "from_rates" : "unconditional"},
  };
  out["check"] = {{"w1", cfg.check.w1}, {"ks", cfg.check.ks}};
  out["save_trajectories"] = cfg.save_trajectories;
  return out;
}

SystemConfig first_system(const ExperimentConfig& cfg) {
  if (cfg.kind == ExperimentConfig::Kind::system) return cfg.system;
  LadderSpec one = cfg.ladder;
  one.n_values.resize(1);
  one.reps = 1;
  return build_ladder(one).front();
}

// ---------------------------------------------------------------------------
// Trajectory files

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf.data(), buf.size(), "%.*g", precision, x);
    if (std::strtod(buf.data(), nullptr) == x) break;
  }
  return buf.data();
}

std::string csv_preamble(std::string_view kind, std::string_view header) {
  std::string out = "# schema_version=" + std::to_string(kCsvSchemaVersion) + " kind=";
  out += kind;
  out += '\n';
  out += header;
  out += '\n';
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

EventKind parse_event_kind(const std::string& s) {
  for (auto k : {EventKind::arrival, EventKind::routing, EventKind::completion, EventKind::potential_no_op,
                 EventKind::abandonment}) {
    if (s == to_string(k)) return k;
  }
  throw std::runtime_error("unknown event kind '" + s + "'");
}

/// Rebuilds the derived parts of a trajectory from its config and events.
void complete_trajectory(Trajectory& traj) {
  traj.idle_episodes = derive_idle_episodes(traj);
  traj.cumulative_idle = idle_time_by(traj, traj.config.horizon);
  traj.grid.clear();
  // Walk the events once; X at a grid point includes events at that time.
  const auto grid = sampling_grid(traj.config.horizon, traj.config.effective_grid_spacing());
  std::size_t i = 0;
  std::int64_t x = traj.config.x0;
  for (double t : grid) {
    while (i < traj.events.size() && traj.events[i].time <= t) x = traj.events[i++].headcount;
    traj.grid.push_back({t, x, std::max<std::int64_t>(traj.config.n - x, 0)});
  }
}

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::endian::native == std::endian::little, "binary format is little-endian");
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw std::runtime_error("truncated binary trajectory");
  T value;
  std::memcpy(&value, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

constexpr char kMagic[8] = {'H', 'W', 'S', 'T', 'R', 'A', 'J', '\0'};

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const fs::path& path) {
  std::string out = "# schema_version=" + std::to_string(kCsvSchemaVersion) + " kind=trajectory\n";
  out += "# meta=" + to_json(traj.config).dump() + "\n";
  out += "time,kind,server,headcount\n";
  for (const EventRecord& e : traj.events) {
    out += format_double(e.time);
    out += ',';
    out += to_string(e.kind);
    out += ',';
    out += std::to_string(e.server);
    out += ',';
    out += std::to_string(e.headcount);
    out += '\n';
  }
  write_text(path, out);
}

Trajectory read_trajectory_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  Trajectory traj;
  bool have_meta = false;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# meta=", 0) == 0) {
        traj.config = system_config_from_json(json::parse(line.substr(7)));
        have_meta = true;
      } else if (line.rfind("# schema_version=", 0) == 0) {
        const int version = std::stoi(line.substr(17));
        if (version != kCsvSchemaVersion) {
          throw std::runtime_error("unsupported trajectory schema_version " + std::to_string(version));
        }
      }
      continue;
    }
    if (!have_header) {
      if (line != "time,kind,server,headcount") throw std::runtime_error("unexpected trajectory CSV header");
      have_header = true;
      continue;
    }
    std::istringstream row(line);
    std::string time, kind, server, headcount;
    std::getline(row, time, ',');
    std::getline(row, kind, ',');
    std::getline(row, server, ',');
    std::getline(row, headcount, ',');
    traj.events.push_back({std::strtod(time.c_str(), nullptr), parse_event_kind(kind),
                           static_cast<ServerIndex>(std::stol(server)), std::stoll(headcount)});
  }
  if (!have_meta) throw std::runtime_error("trajectory CSV lacks a '# meta=' line");
  complete_trajectory(traj);
  return traj;
}

void write_trajectory_binary(const Trajectory& traj, const fs::path& path) {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kBinarySchemaVersion);
  const std::string meta = to_json(traj.config).dump();
  put<std::uint64_t>(out, meta.size());
  out += meta;
  put<std::uint64_t>(out, traj.events.size());
  for (const EventRecord& e : traj.events) {
    put<double>(out, e.time);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(e.kind));
    put<std::int32_t>(out, e.server);
    put<std::int64_t>(out, e.headcount);
  }
  write_text(path, out);
}

Trajectory read_trajectory_binary(const fs::path& path) {
  const std::string in = read_text(path);
  if (in.size() < sizeof(kMagic) || std::memcmp(in.data(), kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a binary trajectory: " + path.string());
  }
  std::size_t pos = sizeof(kMagic);
  const auto version = take<std::uint32_t>(in, pos);
  if (version != kBinarySchemaVersion) {
    throw std::runtime_error("unsupported binary trajectory version " + std::to_string(version));
  }
  const auto meta_len = take<std::uint64_t>(in, pos);
  if (pos + meta_len > in.size()) throw std::runtime_error("truncated binary trajectory");
  Trajectory traj;
  traj.config = system_config_from_json(json::parse(in.substr(pos, meta_len)));
  pos += meta_len;
  const auto count = take<std::uint64_t>(in, pos);
  traj.events.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    EventRecord e{};
    e.time = take<double>(in, pos);
    const auto kind = take<std::uint8_t>(in, pos);
    if (kind > static_cast<std::uint8_t>(EventKind::abandonment)) throw std::runtime_error("bad event kind");
    e.kind = static_cast<EventKind>(kind);
    e.server = take<std::int32_t>(in, pos);
    e.headcount = take<std::int64_t>(in, pos);
    traj.events.push_back(e);
  }
  complete_trajectory(traj);
  return traj;
}

Trajectory read_trajectory(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  char head[sizeof(kMagic)] = {};
  in.read(head, sizeof(head));
  if (in.gcount() == sizeof(head) && std::memcmp(head, kMagic, sizeof(kMagic)) == 0) {
    return read_trajectory_binary(path);
  }
  return read_trajectory_csv(path);
}

// ---------------------------------------------------------------------------
// Digests

namespace {

std::string hex(const unsigned char* data, unsigned len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 0xF];
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  return hex(digest, len);
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_text(path)); }

}  // namespace hwsim
