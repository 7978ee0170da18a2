#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kcd/propagate.hpp"

namespace kcd::cli {

/// Raised for any malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kConfigFormatVersion = 1;

enum class Observable { fidelity, gap, gamma, flux, support, energy };
std::string_view to_string(Observable o);

/// One experiment description. The text format is `key = value` per line,
/// `#` comments, lists comma-separated:
///
///     format_version = 1
///     cluster = builtin:honeycomb12      # or a path to a cluster file
///     J = 1
///     B = 50
///     delta = 0.001                      # or: b_delta = 0.05, 0.1
///     tau = 0.1, 1, 20
///     protocols = unassisted, cd
///     ramp = paper-cos2sin2
///     n_steps = auto                     # max(1000, ceil(200 tau))
///     krylov_dim = 30
///     step_tolerance = 1e-10
///     max_substeps = 200
///     n_records = 21
///     observables = fidelity, gamma, flux, support, energy, gap
///     support_states = 64
///     memory_budget_mb = 2048
///     workers = 1
///     output_dir = results
struct RunConfig {
  std::string cluster = "builtin:honeycomb24";
  double J = 1.0;
  double B = 50.0;
  /// Final-field offsets; a b_delta entry is stored as delta = b_delta / B.
  std::vector<double> deltas{0.001};
  std::vector<double> taus;
  std::vector<Protocol> protocols{Protocol::unassisted, Protocol::cd};
  std::string ramp = RampSchedule::kDefaultForm;
  std::optional<int> n_steps;  // empty: default_n_steps(tau)
  int krylov_dim = 30;
  double step_tolerance = 1e-10;
  int max_substeps = 200;
  int n_records = 21;
  std::vector<Observable> observables;
  bool observables_given = false;
  int support_states = 64;
  std::size_t memory_budget_mb = 2048;
  int workers = 1;
  std::filesystem::path output_dir = "results";

  /// Keys in file order as written, for the echo in summaries.
  std::vector<std::pair<std::string, std::string>> echo;

  bool wants(Observable o) const;
};

/// Parses and checks a config. The cluster is not loaded here.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Checks that need the cluster (oracle size limit, partitions, plaquettes).
/// Without an observables key, `gap` is dropped above kGapDefaultSites.
inline constexpr int kGapDefaultSites = 18;
void resolve_for_cluster(RunConfig& cfg, const HoneycombCluster& cluster);

/// Applies the KCD_WORKERS environment override, if set.
void apply_environment(RunConfig& cfg);

}  // namespace kcd::cli
