#pragma once

// Independent dense reference implementations for tests. Nothing here goes
// through the bitmask Pauli encoding, CompiledOperator or LAPACK.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "kcd/lattice.hpp"
#include "kcd/pauli.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// 2x2 matrix of 'I', 'X', 'Y' or 'Z'.
Mat pauli(char letter);

/// Kronecker product of per-site letters; site 0 is the least significant
/// bit of the basis index.
Mat kron_string(const std::string& letters_by_site);

/// Sum of coeff * kron_string over the terms of a PauliSum.
Mat dense(const kcd::PauliSum& sum);

Mat kitaev(const kcd::HoneycombCluster& c, double J);
Mat zeeman(const kcd::HoneycombCluster& c, double B);

/// The three commutator pieces written out link by link, with the printed
/// overall sign (their sum is -[H_k, H_m] for H_k = -J sum sigma sigma).
Mat appendix_xyz(const kcd::HoneycombCluster& c, double J, double B);

/// exp(-i t H) by Eigen's self-adjoint solver.
Mat expm_hermitian(const Mat& h, double t);

/// Eigenvalues ascending, Eigen's self-adjoint solver.
Eigen::VectorXd eigenvalues(const Mat& h);

/// Reduced density matrix on `sites` by explicit partial trace.
Mat reduced_density_matrix(const Vec& psi, int n_sites, const std::vector<int>& sites);
/// -Tr rho ln rho from the eigenvalues of rho.
double von_neumann(const Mat& rho);

/// Normalized complex vector from a small LCG, independent of the library.
Vec random_state(int n_sites, std::uint64_t seed);

kcd::HoneycombCluster two_site_z();

}  // namespace oracle
