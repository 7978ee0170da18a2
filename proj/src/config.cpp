#include "kcd/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace kcd::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + " (" + key + "): " + msg);
}

double to_double(int line, const std::string& key, const std::string& v) {
  double d = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(d)) fail(line, key, "not a number: '" + v + "'");
  return d;
}

long long to_int(int line, const std::string& key, const std::string& v) {
  long long d = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc() || p != v.data() + v.size()) fail(line, key, "not an integer: '" + v + "'");
  return d;
}

Observable observable_from_string(int line, const std::string& s) {
  for (auto o : {Observable::fidelity, Observable::gap, Observable::gamma, Observable::flux, Observable::support,
                 Observable::energy})
    if (to_string(o) == s) return o;
  fail(line, "observables", "unknown observable '" + s + "'");
}

}  // namespace

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::fidelity: return "fidelity";
    case Observable::gap: return "gap";
    case Observable::gamma: return "gamma";
    case Observable::flux: return "flux";
    case Observable::support: return "support";
    case Observable::energy: return "energy";
  }
  return "?";
}

bool RunConfig::wants(Observable o) const {
  return std::find(observables.begin(), observables.end(), o) != observables.end();
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  std::set<std::string> seen;
  std::optional<int> version;
  std::vector<double> b_deltas;
  bool have_delta = false;

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(std::string_view(raw).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(line, body, "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string val = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) fail(line, key, "empty key");
    if (val.empty()) fail(line, key, "empty value");
    if (!seen.insert(key).second) fail(line, key, "key given twice");
    cfg.echo.emplace_back(key, val);

    if (key == "format_version") {
      version = static_cast<int>(to_int(line, key, val));
    } else if (key == "cluster") {
      cfg.cluster = val;
    } else if (key == "J") {
      cfg.J = to_double(line, key, val);
    } else if (key == "B") {
      cfg.B = to_double(line, key, val);
    } else if (key == "delta") {
      cfg.deltas.clear();
      for (const auto& s : split_list(val)) cfg.deltas.push_back(to_double(line, key, s));
      have_delta = true;
    } else if (key == "b_delta") {
      for (const auto& s : split_list(val)) b_deltas.push_back(to_double(line, key, s));
    } else if (key == "tau") {
      for (const auto& s : split_list(val)) {
        const double t = to_double(line, key, s);
        if (!(t > 0)) fail(line, key, "durations must be positive");
        cfg.taus.push_back(t);
      }
    } else if (key == "protocols") {
      cfg.protocols.clear();
      for (const auto& s : split_list(val)) {
        try {
          cfg.protocols.push_back(protocol_from_string(s));
        } catch (const std::invalid_argument& e) {
          fail(line, key, e.what());
        }
      }
    } else if (key == "ramp") {
      cfg.ramp = val;
    } else if (key == "n_steps") {
      if (val != "auto") cfg.n_steps = static_cast<int>(to_int(line, key, val));
    } else if (key == "krylov_dim") {
      cfg.krylov_dim = static_cast<int>(to_int(line, key, val));
    } else if (key == "step_tolerance") {
      cfg.step_tolerance = to_double(line, key, val);
    } else if (key == "max_substeps") {
      cfg.max_substeps = static_cast<int>(to_int(line, key, val));
    } else if (key == "n_records") {
      cfg.n_records = static_cast<int>(to_int(line, key, val));
    } else if (key == "observables") {
      for (const auto& s : split_list(val)) cfg.observables.push_back(observable_from_string(line, s));
      cfg.observables_given = true;
    } else if (key == "support_states") {
      cfg.support_states = static_cast<int>(to_int(line, key, val));
    } else if (key == "memory_budget_mb") {
      const long long mb = to_int(line, key, val);
      if (mb < 1) fail(line, key, "must be positive");
      cfg.memory_budget_mb = static_cast<std::size_t>(mb);
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(to_int(line, key, val));
    } else if (key == "output_dir") {
      cfg.output_dir = val;
    } else {
      fail(line, key, "unknown key");
    }
  }

  if (!version) throw ConfigError("config: format_version is required");
  if (*version != kConfigFormatVersion)
    throw ConfigError("config: unsupported format_version " + std::to_string(*version) + " (expected " +
                      std::to_string(kConfigFormatVersion) + ")");
  if (have_delta && !b_deltas.empty()) throw ConfigError("config: give either delta or b_delta, not both");
  if (!(cfg.J > 0)) throw ConfigError("config: J must be positive");
  if (!(cfg.B >= 0)) throw ConfigError("config: B must be non-negative");
  if (!b_deltas.empty()) {
    if (!(cfg.B > 0)) throw ConfigError("config: b_delta needs B > 0");
    cfg.deltas.clear();
    for (double bd : b_deltas) cfg.deltas.push_back(bd / cfg.B);
  }
  if (cfg.deltas.empty()) throw ConfigError("config: delta list is empty");
  for (double d : cfg.deltas)
    if (!(d > 0)) throw ConfigError("config: delta must be positive");
  if (cfg.taus.empty()) throw ConfigError("config: tau list is required and must be non-empty");
  if (cfg.protocols.empty()) throw ConfigError("config: protocols list is empty");
  try {
    RampSchedule{1.0, cfg.ramp}.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.n_steps && *cfg.n_steps < 2) throw ConfigError("config: n_steps must be at least 2");
  if (cfg.krylov_dim < 2) throw ConfigError("config: krylov_dim must be at least 2");
  if (!(cfg.step_tolerance > 0)) throw ConfigError("config: step_tolerance must be positive");
  if (cfg.max_substeps < 1) throw ConfigError("config: max_substeps must be positive");
  if (cfg.n_records < 2) throw ConfigError("config: n_records must be at least 2");
  if (cfg.support_states < 1) throw ConfigError("config: support_states must be positive");
  if (cfg.workers < 1) throw ConfigError("config: workers must be positive");
  if (!cfg.observables_given) cfg.observables = {Observable::fidelity, Observable::gamma, Observable::flux,
                                            Observable::support, Observable::energy, Observable::gap};
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void resolve_for_cluster(RunConfig& cfg, const HoneycombCluster& cluster) {
  if (!cfg.observables_given && cluster.n_sites() > kGapDefaultSites)
    std::erase(cfg.observables, Observable::gap);
  const bool oracle = std::find(cfg.protocols.begin(), cfg.protocols.end(), Protocol::exact_cd_oracle) !=
                      cfg.protocols.end();
  if (oracle && cluster.n_sites() > kMaxDenseSites)
    throw ConfigError("config: exact-cd-oracle is limited to " + std::to_string(kMaxDenseSites) + " sites, cluster has " +
                      std::to_string(cluster.n_sites()));
  if (cfg.wants(Observable::gamma))
    for (const char* p : {"A", "B", "C"})
      if (!cluster.find_partition(p))
        throw ConfigError(std::string("config: observable gamma needs partition ") + p + " in the cluster");
  if (cfg.wants(Observable::flux) && cluster.plaquettes().empty())
    throw ConfigError("config: observable flux needs a plaquette in the cluster");
}

void apply_environment(RunConfig& cfg) {
  if (const char* w = std::getenv("KCD_WORKERS")) {
    const std::string v = w;
    int n = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || p != v.data() + v.size() || n < 1)
      throw ConfigError("KCD_WORKERS must be a positive integer, got '" + v + "'");
    cfg.workers = n;
  }
}

}  // namespace kcd::cli
