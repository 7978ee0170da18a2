#pragma once

#include "kcd/lattice.hpp"
#include "kcd/pauli.hpp"
#include "kcd/state.hpp"

namespace kcd {

/// H0(lambda) = H_k + (lambda + delta) H_m with the field along [111].
struct ModelParams {
  double J = 1.0;
  double B = 50.0;
  double delta = 0.001;
  double lambda = 1.0;

  /// lambda + delta, the weight of H_m in H0.
  double field_scale() const noexcept { return lambda + delta; }
  /// Throws std::invalid_argument unless J > 0, B >= 0, delta > 0, lambda in [0, 1].
  void check() const;
};

/// -J sum over links of sigma^g_i sigma^g_j.
PauliSum build_kitaev(const HoneycombCluster& cluster, double J);
/// B sum over sites of (sigma^x + sigma^y + sigma^z).
PauliSum build_zeeman(const HoneycombCluster& cluster, double B);
PauliSum build_h0(const HoneycombCluster& cluster, const ModelParams& params);

/// (-1/4) / (9 (lambda+delta)^2 B^2 + 5 J^2).
double alpha1_closed_form(const ModelParams& params);

/// alpha1 from the ratio of traces that minimizes Tr G^2, evaluated in the
/// Pauli algebra. The common factor B^2 is cancelled analytically so the
/// B = 0 limit is finite.
double alpha1_numeric(const HoneycombCluster& cluster, const ModelParams& params);

struct GaugePotential {
  PauliSum op;
  double alpha1 = 0;
};

/// i alpha1 [H_k, H_m] with the closed-form alpha1.
GaugePotential build_gauge_potential(const HoneycombCluster& cluster, const ModelParams& params);

/// Link-sum form of the first-order gauge potential. `cyclic` takes the
/// z-link pair as (s^z s^x - s^z s^y), the cyclic image of the x- and y-link
/// pairs, and equals i alpha1 [H_k, H_m]. `as_printed` keeps the z-link pair
/// as (s^z s^y - s^z s^x), which flips the sign of every z-link term.
enum class LinkSumForm { cyclic, as_printed };

/// (B/J) / (18 (lambda+delta)^2 (B/J)^2 + 10) times the sum over gamma-links
/// of (s^g_i s^a_j - s^g_i s^b_j) + (i <-> j), with (a, b) = (y, z), (z, x)
/// for gamma = x, y and (x, y) or (y, x) for gamma = z.
PauliSum gauge_potential_link_sum(const HoneycombCluster& cluster, const ModelParams& params,
                                  LinkSumForm form = LinkSumForm::cyclic);

/// H0(lambda) + lambda_dot * A^(1)_lambda.
PauliSum build_cd_hamiltonian(const HoneycombCluster& cluster, const ModelParams& params, double lambda_dot);

/// Tr(G^2) / 2^N with G = H_m - i [H0, A].
double variance_S(const HoneycombCluster& cluster, const ModelParams& params, const PauliSum& A);

/// Exact gauge potential i sum_{m != n} |m><m| dH0 |n><n| / (E_n - E_m).
/// Eigenvalues closer than kDegeneracyTolerance times the spectral width form
/// one block; pairs inside a block are skipped.
inline constexpr double kDegeneracyTolerance = 1e-9;
DenseOperator exact_gauge_potential_spectral(const DenseOperator& H0, const DenseOperator& dH0);

}  // namespace kcd
