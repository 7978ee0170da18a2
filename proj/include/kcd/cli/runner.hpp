#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcd/cli/config.hpp"
#include "kcd/lattice.hpp"
#include "kcd/observables.hpp"

namespace kcd::cli {

inline constexpr int kSummarySchemaVersion = 1;

struct Record {
  int step = 0;
  double t = 0, lambda = 0, lambda_dot = 0;
  double fidelity = 0;
  std::optional<double> gap;
};

struct FinalObservables {
  double fidelity = 0;
  std::optional<double> gamma;
  std::optional<double> flux;               // reference plaquette
  std::vector<double> flux_all;             // every plaquette, file order
  std::optional<SupportSize> support;
  std::optional<double> energy_offset;
};

struct RunResult {
  Protocol protocol = Protocol::cd;
  double tau = 0;
  double delta = 0;
  bool ok = false;
  std::string error;
  int n_steps = 0;
  int krylov_dim_used = 0;
  long long matvecs = 0;
  double max_norm_drift = 0;
  std::vector<Record> records;
  FinalObservables final;
  std::optional<double> gap_min;
  std::string csv;  // file name inside output_dir, empty on failure
  double wall_seconds = 0;
};

/// Observables of the final Hamiltonian's own ground state, per delta.
struct GroundStateReference {
  double delta = 0;
  double energy = 0;
  std::optional<double> gap;
  std::optional<double> gamma;
  std::optional<double> flux;
};

struct RunSummary {
  std::vector<GroundStateReference> references;
  std::vector<RunResult> runs;
  bool all_ok() const;
};

/// n_steps actually used: the configured or default count rounded up to a
/// multiple of n_records - 1 so records fall on grid points.
int effective_n_steps(const RunConfig& cfg, double tau);

/// Executes every (delta, tau, protocol) combination, writes one CSV per
/// successful run plus summary.json and timing.json into cfg.output_dir.
/// A failing run is recorded and the others proceed.
RunSummary run_experiment(const RunConfig& cfg, const HoneycombCluster& cluster, const std::string& config_text,
                          std::ostream* log = nullptr);

/// summary.json contents; byte-identical for identical inputs (no timings).
nlohmann::json summary_json(const RunConfig& cfg, const HoneycombCluster& cluster, const std::string& config_text,
                            const RunSummary& summary);

}  // namespace kcd::cli
