#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "kcd/eigensolver.hpp"
#include "kcd/lattice.hpp"
#include "kcd/pauli.hpp"
#include "kcd/state.hpp"

namespace kcd {

/// |<psi|phi>|^2, clamped to [0, 1].
double fidelity(const Amplitudes& psi, const Amplitudes& phi);
double fidelity(const StateVector& psi, const StateVector& phi);

/// Probabilities below this are dropped from entropy sums.
inline constexpr double kEntropyClip = 1e-12;
/// The smaller side of a cut may hold at most this many sites.
inline constexpr int kMaxEntropySites = 14;

/// Von Neumann entropy (natural log) of the reduced state on `sites`
/// (0-based), from the singular values of psi reshaped to subset x rest.
double entanglement_entropy(const Amplitudes& psi, int n_sites, std::span<const int> sites);
double entanglement_entropy(const StateVector& psi, std::span<const int> sites);

struct Partitions {
  std::vector<int> a, b, c;
};

/// Partitions named A, B and C; throws if the cluster lacks one.
Partitions cluster_partitions(const HoneycombCluster& cluster);

struct TopologicalEntropy {
  double gamma = 0;
  // S_A, S_B, S_C, S_AB, S_BC, S_AC, S_ABC
  std::array<double, 7> entropies{};
};

/// gamma = -(S_A + S_B + S_C - S_AB - S_BC - S_AC + S_ABC).
TopologicalEntropy topological_entropy(const Amplitudes& psi, int n_sites, const Partitions& parts);

/// Product of the plaquette's site labels.
PauliSum flux_operator(int n_sites, const Plaquette& p);
double flux_expectation(const Amplitudes& psi, int n_sites, const Plaquette& p);

enum class SupportMode { exact, truncated_interval };
std::string_view to_string(SupportMode m);

struct SupportSize {
  SupportMode mode = SupportMode::exact;
  /// Exact value; in truncated mode the lower end of the interval.
  double xi = 1;
  double xi_low = 1;
  double xi_high = 1;
  int states = 0;          // eigenstates resolved
  double captured = 1;     // total weight on them
};

struct SupportOptions {
  /// Eigenstates used in truncated mode (lowered to fit memory_budget).
  int truncated_states = 64;
  /// Clusters up to this size are diagonalized in full.
  int exact_max_sites = kMaxDenseSites;
  std::size_t memory_budget = std::size_t{2} << 30;
  LanczosOptions lanczos{};
};

/// Eigenstates of the final Hamiltonian against which xi is measured: all of
/// them (exact mode, n_sites <= exact_max_sites) or the lowest few.
struct SpectralBasis {
  SupportMode mode = SupportMode::exact;
  Eigen::Index dimension = 0;
  std::vector<double> energies;     // ascending
  Eigen::MatrixXcd vectors;         // exact mode: columns are eigenstates
  std::vector<Amplitudes> lowest;   // truncated mode
  double degeneracy_tolerance = 0;  // energies closer than this share a level
};

SpectralBasis spectral_basis(const PauliSum& h_final, const SupportOptions& opts = {});

/// xi^-1 = sum_i |<E_i|psi>|^4. The weight of a degenerate level is summed
/// before squaring, which makes xi independent of the basis chosen inside
/// the level. In truncated mode the leftover weight r = 1 - sum w_i is
/// lumped into one state (xi_low) or spread over all others (xi_high).
SupportSize support_size(const Amplitudes& psi, const SpectralBasis& basis);
SupportSize support_size(const Amplitudes& psi, const PauliSum& h_final, const SupportOptions& opts = {});

/// <psi|H|psi> - e_ground.
double energy_offset(const Amplitudes& psi, const PauliSum& h_final, double e_ground);

}  // namespace kcd
