#include "kcd/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "kcd/dense.hpp"

namespace kcd {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::unassisted: return "unassisted";
    case Protocol::cd: return "cd";
    case Protocol::exact_cd_oracle: return "exact-cd-oracle";
  }
  return "?";
}

Protocol protocol_from_string(std::string_view s) {
  if (s == "unassisted") return Protocol::unassisted;
  if (s == "cd") return Protocol::cd;
  if (s == "exact-cd-oracle") return Protocol::exact_cd_oracle;
  throw std::invalid_argument("unknown protocol '" + std::string(s) + "'");
}

void PropagatorConfig::check() const {
  if (n_steps < 2) throw std::invalid_argument("n_steps must be at least 2");
  if (krylov_dim < 2) throw std::invalid_argument("krylov_dim must be at least 2");
  if (!(step_tolerance > 0)) throw std::invalid_argument("step_tolerance must be positive");
  if (max_substeps < 1) throw std::invalid_argument("max_substeps must be positive");
}

int default_n_steps(double tau) { return std::max(1000, static_cast<int>(std::ceil(200.0 * tau))); }

PauliSum protocol_hamiltonian(const HoneycombCluster& cluster, const ProtocolRun& run, double t) {
  ModelParams p = run.params;
  p.lambda = std::clamp(lambda_at(run.schedule, t), 0.0, 1.0);
  if (run.protocol == Protocol::cd) return build_cd_hamiltonian(cluster, p, lambda_dot_at(run.schedule, t));
  return build_h0(cluster, p);
}

namespace {

StepInfo info_at(const ProtocolRun& run, int step, double dt) {
  StepInfo s;
  s.step = step;
  s.t = step == run.propagator.n_steps ? run.schedule.tau : step * dt;
  s.lambda = lambda_at(run.schedule, s.t);
  s.lambda_dot = lambda_dot_at(run.schedule, s.t);
  return s;
}

void check_norm(const Amplitudes& v, PropagationResult& r, int step) {
  const double drift = std::abs(v.norm() - 1.0);
  r.max_norm_drift = std::max(r.max_norm_drift, drift);
  if (drift > kMaxNormDrift)
    throw PropagationError("norm drift " + std::to_string(drift) + " exceeds limit after step " + std::to_string(step));
}

}  // namespace

PropagationResult propagate(const ProtocolRun& run, const HoneycombCluster& cluster, const StateVector& initial,
                            const StepObserver& observer) {
  run.params.check();
  run.schedule.check();
  run.propagator.check();
  if (initial.n_sites() != cluster.n_sites()) throw std::invalid_argument("initial state does not match cluster");
  if (run.protocol == Protocol::exact_cd_oracle && cluster.n_sites() > kMaxDenseSites)
    throw std::invalid_argument("exact-cd-oracle is limited to " + std::to_string(kMaxDenseSites) + " sites");

  const int n = run.propagator.n_steps;
  const double dt = run.schedule.tau / n;
  PropagationResult result;
  Amplitudes psi = initial.amplitudes();

  const std::size_t vec_bytes = static_cast<std::size_t>(psi.size()) * sizeof(cplx);
  KrylovOptions kopts;
  kopts.tolerance = run.propagator.step_tolerance;
  kopts.max_substeps = run.propagator.max_substeps;
  kopts.krylov_dim = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(run.propagator.krylov_dim), run.propagator.memory_budget / vec_bytes));
  if (kopts.krylov_dim < 2) throw std::invalid_argument("memory budget leaves no room for a Krylov basis");
  result.krylov_dim_used = kopts.krylov_dim;

  // Dense pieces of the oracle do not depend on time.
  DenseOperator hk, hm;
  if (run.protocol == Protocol::exact_cd_oracle) {
    hk = to_dense(build_kitaev(cluster, run.params.J));
    hm = to_dense(build_zeeman(cluster, run.params.B));
  }

  std::optional<KrylovPropagator> krylov;
  if (run.protocol != Protocol::exact_cd_oracle) krylov.emplace(psi.size(), kopts);

  if (observer) observer(info_at(run, 0, dt), psi);
  for (int k = 0; k < n; ++k) {
    const double tm = (k + 0.5) * dt;
    if (run.protocol == Protocol::exact_cd_oracle) {
      const double s = lambda_at(run.schedule, tm) + run.params.delta;
      const DenseOperator h0 = hk + s * hm;
      const DenseOperator h = h0 + lambda_dot_at(run.schedule, tm) * exact_gauge_potential_spectral(h0, hm);
      psi = unitary_exponential(h, dt) * psi;
    } else {
      const CompiledOperator h(protocol_hamiltonian(cluster, run, tm));
      const KrylovStats st = krylov->evolve(h, psi, dt);
      result.matvecs += st.matvecs;
      result.substeps += st.substeps;
    }
    check_norm(psi, result, k + 1);
    if (observer) observer(info_at(run, k + 1, dt), psi);
  }
  result.final_state = StateVector::normalized(cluster.n_sites(), std::move(psi));
  return result;
}

}  // namespace kcd
