// kcd: command-line front end for counterdiabatic state-preparation runs.
//
//   kcd run --config FILE
//   kcd compare A.json B.json [--tol X] [--tol-for F=1e-6 ...] [--cross-protocol]
//   kcd cluster validate FILE [--open]
//   kcd alpha1 --B V --lambda V --delta V --J V [--cluster REF]
//
// Exit codes: 0 success, 1 run failure or comparison outside tolerance,
// 2 configuration or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kcd/cli/compare.hpp"
#include "kcd/cli/config.hpp"
#include "kcd/cli/runner.hpp"
#include "kcd/lattice.hpp"
#include "kcd/model.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRunFailure = 1;
constexpr int kConfigError = 2;

int cmd_run(const std::string& config_path) {
  using namespace kcd::cli;
  std::string text;
  RunConfig cfg;
  kcd::HoneycombCluster cluster;
  try {
    std::ifstream f(config_path);
    if (!f) throw ConfigError("cannot read config file " + config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
    cfg = parse_config(text);
    apply_environment(cfg);
    cluster = kcd::resolve_cluster(cfg.cluster);
    resolve_for_cluster(cfg, cluster);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    const RunSummary s = run_experiment(cfg, cluster, text, &std::cerr);
    std::cout << "wrote " << (cfg.output_dir / "summary.json").string() << "\n";
    return s.all_ok() ? kOk : kRunFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRunFailure;
  }
}

int cmd_compare(const std::string& a, const std::string& b, double tol, const std::vector<std::string>& per_quantity,
                bool cross_protocol) {
  using namespace kcd::cli;
  CompareOptions opts;
  opts.default_tolerance = tol;
  try {
    for (const auto& item : per_quantity) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ShapeMismatch("--tol-for expects QUANTITY=VALUE, got '" + item + "'");
      opts.tolerances[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    const auto report = compare(load_summary(a), load_summary(b), opts, cross_protocol);
    std::cout << report.to_text();
    return report.all_pass() ? kOk : kRunFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

int cmd_validate(const std::string& path, bool open) {
  try {
    auto c = kcd::validate(kcd::load_cluster_file(path), open ? kcd::Boundary::open : kcd::Boundary::toroidal);
    std::cout << "valid: " << c.n_sites() << " sites, " << c.links().size() << " links, " << c.plaquettes().size()
              << " plaquettes";
    for (const auto& p : c.partitions()) std::cout << ", part " << p.name << " (" << p.sites.size() << ")";
    std::cout << "\n";
    return kOk;
  } catch (const kcd::ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "invalid: " << e.what() << "\n";
  }
  return kConfigError;
}

int cmd_alpha1(const kcd::ModelParams& p, const std::string& cluster_ref) {
  try {
    p.check();
    std::printf("alpha1 closed form: %.17g\n", kcd::alpha1_closed_form(p));
    if (!cluster_ref.empty()) {
      const auto c = kcd::resolve_cluster(cluster_ref);
      std::printf("alpha1 numeric (%s): %.17g\n", c.name().c_str(), kcd::alpha1_numeric(c, p));
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterdiabatic preparation of the Kitaev honeycomb ground state"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "Config file")->required();

  std::string sum_a, sum_b;
  double tol = 1e-9;
  std::vector<std::string> tol_for;
  bool cross = false;
  auto* cmp = app.add_subcommand("compare", "Compare two summary.json files run by run");
  cmp->add_option("a", sum_a, "First summary")->required();
  cmp->add_option("b", sum_b, "Second summary")->required();
  cmp->add_option("--tol", tol, "Absolute tolerance for every quantity");
  cmp->add_option("--tol-for", tol_for, "Per-quantity tolerance, e.g. F=1e-6");
  cmp->add_flag("--cross-protocol", cross, "Pair runs by (tau, delta) even if protocols differ");

  std::string cluster_file;
  bool open = false;
  auto* cluster = app.add_subcommand("cluster", "Cluster file utilities");
  cluster->require_subcommand(1);
  auto* val = cluster->add_subcommand("validate", "Parse and validate a cluster file");
  val->add_option("file", cluster_file, "Cluster file")->required();
  val->add_flag("--open", open, "Allow sites with fewer than three links");

  kcd::ModelParams params{1.0, 1.0, 0.001, 1.0};
  std::string alpha_cluster;
  auto* alpha = app.add_subcommand("alpha1", "Print the first-order variational coefficient");
  alpha->add_option("--B", params.B, "Zeeman scale")->required();
  alpha->add_option("--lambda", params.lambda, "Protocol parameter in [0, 1]")->required();
  alpha->add_option("--delta", params.delta, "Field offset")->required();
  alpha->add_option("--J", params.J, "Kitaev coupling")->required();
  alpha->add_option("--cluster", alpha_cluster, "Also evaluate the trace formula on this cluster");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*run) return cmd_run(config_path);
  if (*cmp) return cmd_compare(sum_a, sum_b, tol, tol_for, cross);
  if (*val) return cmd_validate(cluster_file, open);
  if (*alpha) return cmd_alpha1(params, alpha_cluster);
  return kConfigError;
}
