#include "kcd/krylov.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <vector>

namespace kcd {

namespace {

constexpr int kMinDim = 4;

// exp(-i T h) e_1 from the eigendecomposition of the real tridiagonal T.
Eigen::VectorXcd small_exp(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es, double h) {
  const Eigen::VectorXd& th = es.eigenvalues();
  const Eigen::MatrixXd& q = es.eigenvectors();
  Eigen::VectorXcd c(th.size());
  for (Eigen::Index k = 0; k < th.size(); ++k) c[k] = std::exp(cplx(0, -th[k] * h)) * q(0, k);
  return q.cast<cplx>() * c;
}

}  // namespace

KrylovStats krylov_evolve(const CompiledOperator& H, Amplitudes& v, double dt, const KrylovOptions& opts) {
  return KrylovPropagator(v.size(), opts).evolve(H, v, dt);
}

KrylovPropagator::KrylovPropagator(Eigen::Index dim, const KrylovOptions& opts) : opts_(opts) {
  if (opts.krylov_dim < 2) throw std::invalid_argument("krylov_dim must be at least 2");
  if (opts.max_substeps < 1) throw std::invalid_argument("max_substeps must be positive");
  const auto m = static_cast<std::size_t>(std::min<Eigen::Index>(opts.krylov_dim, dim));
  basis_.assign(m, Amplitudes(dim));
  w_.resize(dim);
}

KrylovStats KrylovPropagator::evolve(const CompiledOperator& H, Amplitudes& v, double dt) {
  if (v.size() != H.dimension() || v.size() != w_.size())
    throw std::invalid_argument("operator/vector dimension mismatch");
  KrylovStats stats;
  if (dt == 0) return stats;

  const KrylovOptions& opts = opts_;
  auto& basis = basis_;
  auto& w = w_;
  const int m_max = static_cast<int>(basis.size());
  const double min_h = std::abs(dt) / opts.max_substeps;

  double done = 0;
  while (std::abs(dt - done) > 1e-15 * std::abs(dt)) {
    const double remaining = dt - done;
    const double beta0 = v.norm();
    basis[0] = v / beta0;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m_max, m_max);
    int m = m_max;
    double beta_m = 0;
    for (int j = 0; j < m_max; ++j) {
      H.apply(basis[static_cast<std::size_t>(j)].data(), w.data());
      ++stats.matvecs;
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k <= j; ++k) {
          const cplx c = basis[static_cast<std::size_t>(k)].dot(w);
          if (pass == 0 && k == j) t(j, j) = c.real();
          w -= c * basis[static_cast<std::size_t>(k)];
        }
      const double b = w.norm();
      if (j + 1 == m_max) {
        beta_m = b;
        break;
      }
      if (b <= 1e-13 * std::max(H.norm_bound(), 1.0)) {
        // Invariant subspace: the projection is exact.
        m = j + 1;
        beta_m = 0;
        break;
      }
      if (j + 1 >= kMinDim) {
        // Stop growing once the full remaining step already meets the target.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.topLeftCorner(j + 1, j + 1));
        if (b * std::abs(small_exp(es, remaining)[j]) <= opts.tolerance * std::abs(remaining / dt)) {
          m = j + 1;
          beta_m = b;
          break;
        }
      }
      t(j + 1, j) = t(j, j + 1) = b;
      basis[static_cast<std::size_t>(j + 1)] = w / b;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.topLeftCorner(m, m));
    double h = remaining;
    Eigen::VectorXcd y;
    double err = 0;
    while (true) {
      y = small_exp(es, h);
      err = beta_m * std::abs(y[m - 1]);
      if (err <= opts.tolerance * std::abs(h / dt)) break;
      h /= 2;
      if (std::abs(h) < min_h)
        throw StepToleranceError("Krylov step refused: tolerance " + std::to_string(opts.tolerance) +
                                 " not reachable with krylov_dim " + std::to_string(opts.krylov_dim) + " within " +
                                 std::to_string(opts.max_substeps) + " sub-steps");
    }

    v.setZero();
    for (int k = 0; k < m; ++k) v += (beta0 * y[k]) * basis[static_cast<std::size_t>(k)];
    done += h;
    stats.error_estimate += err;
    if (++stats.substeps > opts.max_substeps)
      throw StepToleranceError("Krylov step refused: more than " + std::to_string(opts.max_substeps) + " sub-steps");
  }
  return stats;
}

}  // namespace kcd
