#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kcd/pauli.hpp"
#include "kcd/state.hpp"

namespace kcd {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LanczosOptions {
  /// Residual target ||Hv - Ev|| <= tolerance * sum|c| of the operator.
  double tolerance = 1e-8;
  int max_iterations = 400;  // per restart cycle
  int max_restarts = 20;
  std::uint64_t seed = 20240611;
  /// The Krylov basis is kept for full reorthogonalization while it fits in
  /// this many bytes; otherwise vectors are regenerated in a second pass.
  std::size_t basis_memory = std::size_t{1} << 29;
};

struct Eigenpair {
  double energy = 0;
  StateVector state;
  double residual = 0;
  int matvecs = 0;
};

/// Deterministic start vector: real and imaginary parts uniform in [-1, 1)
/// from the raw output of mt19937_64, then normalized.
Amplitudes start_vector(int n_sites, std::uint64_t seed);

/// Lowest eigenpair of a Hermitian operator by restarted Lanczos.
Eigenpair ground_state(const CompiledOperator& H, const LanczosOptions& opts = {});
Eigenpair ground_state(const PauliSum& H, const LanczosOptions& opts = {});

/// The k lowest eigenpairs, ascending, found one at a time with the earlier
/// vectors projected out. Degenerate levels appear with their multiplicity.
std::vector<Eigenpair> low_eigenpairs(const CompiledOperator& H, int k, const LanczosOptions& opts = {});
std::vector<double> low_spectrum(const PauliSum& H, int k, const LanczosOptions& opts = {});

}  // namespace kcd
