#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kcd/krylov.hpp"
#include "kcd/lattice.hpp"
#include "kcd/model.hpp"
#include "kcd/ramp.hpp"
#include "kcd/state.hpp"

namespace kcd {

enum class Protocol { unassisted, cd, exact_cd_oracle };

std::string_view to_string(Protocol p);
/// "unassisted", "cd" or "exact-cd-oracle".
Protocol protocol_from_string(std::string_view s);

struct PropagatorConfig {
  int n_steps = 1000;
  int krylov_dim = 30;
  double step_tolerance = 1e-10;
  int max_substeps = 200;
  /// Upper bound on the Krylov basis in bytes; krylov_dim is lowered to fit.
  std::size_t memory_budget = std::size_t{3} << 30;

  void check() const;
};

/// max(1000, ceil(200 tau)).
int default_n_steps(double tau);

struct ProtocolRun {
  ModelParams params;  // lambda is driven by the schedule
  Protocol protocol = Protocol::cd;
  RampSchedule schedule;
  PropagatorConfig propagator;
};

/// Hamiltonian of a protocol at time t: H0(lambda(t)), plus lambda_dot(t) A
/// for the cd protocol.
PauliSum protocol_hamiltonian(const HoneycombCluster& cluster, const ProtocolRun& run, double t);

class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxNormDrift = 1e-8;

struct StepInfo {
  int step = 0;  // 0 .. n_steps
  double t = 0;
  double lambda = 0;
  double lambda_dot = 0;
};

/// Called at t = 0 and after each step with the current (unrenormalized)
/// amplitudes.
using StepObserver = std::function<void(const StepInfo&, const Amplitudes&)>;

struct PropagationResult {
  StateVector final_state;
  double max_norm_drift = 0;
  long long matvecs = 0;
  long long substeps = 0;
  int krylov_dim_used = 0;
};

/// Integrates i d/dt psi = H(t) psi over [0, tau] on a uniform grid, with H
/// frozen at each step midpoint. The exact-cd-oracle protocol uses dense
/// H0 + lambda_dot A_exact and exact exponentials (at most 12 sites).
/// Throws StepToleranceError if a step cannot be resolved and
/// PropagationError if | ||psi|| - 1 | exceeds kMaxNormDrift.
PropagationResult propagate(const ProtocolRun& run, const HoneycombCluster& cluster, const StateVector& initial,
                            const StepObserver& observer = {});

}  // namespace kcd
