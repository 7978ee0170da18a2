#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "kcd/pauli.hpp"

namespace kcd {

using Amplitudes = Eigen::VectorXcd;
using DenseOperator = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr int kMaxStateSites = 30;
/// Dense matrices are built only up to 2^12 x 2^12.
inline constexpr int kMaxDenseSites = 12;

/// Normalized amplitude vector over 2^n_sites basis states. Bit k of a basis
/// index is the sigma^z eigenvalue of site k (0 -> +1, 1 -> -1).
class StateVector {
 public:
  StateVector() = default;

  /// Throws unless | ||a||^2 - 1 | <= kNormTolerance.
  static StateVector from_amplitudes(int n_sites, Amplitudes a);
  /// Rescales a to unit norm; throws on a zero vector.
  static StateVector normalized(int n_sites, Amplitudes a);
  static StateVector basis(int n_sites, std::uint64_t index);

  int n_sites() const noexcept { return n_sites_; }
  Eigen::Index dimension() const noexcept { return amps_.size(); }
  const Amplitudes& amplitudes() const noexcept { return amps_; }
  double norm() const { return amps_.norm(); }

 private:
  StateVector(int n_sites, Amplitudes a) : n_sites_(n_sites), amps_(std::move(a)) {}

  int n_sites_ = 0;
  Amplitudes amps_;
};

Eigen::Index hilbert_dimension(int n_sites);

/// A PauliSum prepared for repeated matrix-free products.
///
/// Terms sharing an X mask act as one permutation j -> j ^ x followed by a
/// diagonal phase; the phase depends only on the few sites where the group's
/// Z masks are set and is read from a small table. The output is computed in
/// cache-sized chunks, each written by one thread in a fixed term order, so
/// results are bitwise reproducible.
class CompiledOperator {
 public:
  explicit CompiledOperator(const PauliSum& op);

  int n_sites() const noexcept { return n_sites_; }
  Eigen::Index dimension() const noexcept { return Eigen::Index{1} << n_sites_; }
  double norm_bound() const noexcept { return norm_bound_; }

  /// out = A * in. `in` and `out` must not alias.
  void apply(const cplx* in, cplx* out) const;
  Amplitudes apply(const Amplitudes& in) const;
  cplx expectation(const Amplitudes& v) const;

 private:
  struct Block {
    std::uint64_t mask = 0;
    std::vector<cplx> table;
  };
  struct Group {
    std::uint64_t x = 0;
    std::vector<Block> blocks;
  };

  void apply_chunk(const cplx* in, cplx* out, std::uint64_t base, std::uint64_t len) const;

  int n_sites_ = 0;
  int chunk_bits_ = 0;
  double norm_bound_ = 0;
  std::vector<Group> groups_;
};

/// w = A v for a state-sized amplitude vector; nothing 2^N x 2^N is formed.
Amplitudes apply(const PauliSum& a, const Amplitudes& v);
cplx expectation(const PauliSum& a, const Amplitudes& v);

/// Exact dense matrix; requires n_sites <= kMaxDenseSites.
DenseOperator to_dense(const PauliSum& a);

}  // namespace kcd
