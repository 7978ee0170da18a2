#include "kcd/eigensolver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

#include <cmath>
#include <random>
#include <string>

namespace kcd {

namespace {

constexpr int kMinStoredCycle = 40;

using Found = std::vector<const Amplitudes*>;

void project_out(Amplitudes& v, const Found& found) {
  for (const auto* f : found) v -= f->dot(v) * (*f);
}

struct Tridiagonal {
  std::vector<double> alpha, beta;

  // Lowest eigenpair of the leading j x j block.
  std::pair<double, Eigen::VectorXd> lowest(int j) const {
    Eigen::VectorXd d(j), e(std::max(j - 1, 0));
    for (int k = 0; k < j; ++k) d[k] = alpha[static_cast<std::size_t>(k)];
    for (int k = 0; k + 1 < j; ++k) e[k] = beta[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    return {es.eigenvalues()[0], es.eigenvectors().col(0)};
  }
};

// One Lanczos cycle from `start`; returns the normalized Ritz vector of the
// lowest Ritz value.
Amplitudes lanczos_cycle(const CompiledOperator& H, const Found& found, const Amplitudes& start,
                         const LanczosOptions& opts, double scale, int& matvecs) {
  const Eigen::Index dim = start.size();
  const std::size_t vec_bytes = static_cast<std::size_t>(dim) * sizeof(cplx);
  int m_cap = std::max(2, std::min<int>(opts.max_iterations, static_cast<int>(std::min<Eigen::Index>(dim, 1 << 20))));
  // A shorter cycle with a stored basis beats a long one without, as long as
  // the cycle is not too short to make progress.
  const auto fit = static_cast<int>(std::min<std::size_t>(opts.basis_memory / vec_bytes, 1 << 20)) - 1;
  const bool keep_basis = fit >= std::min(m_cap, kMinStoredCycle);
  if (keep_basis) m_cap = std::min(m_cap, fit);

  std::vector<Amplitudes> basis;
  Tridiagonal t;
  Amplitudes v = start, v_prev = Amplitudes::Zero(dim), w(dim);
  project_out(v, found);
  v.normalize();

  // Runs the three-term recurrence; with keep_basis the vectors are stored
  // and fully reorthogonalized, otherwise only alpha and beta are kept.
  int steps = 0;
  double prev_theta = 0;
  for (int j = 0; j < m_cap; ++j) {
    if (keep_basis) basis.push_back(v);
    H.apply(v.data(), w.data());
    ++matvecs;
    project_out(w, found);
    const double a = v.dot(w).real();
    w -= a * v;
    if (j > 0) w -= t.beta.back() * v_prev;
    if (keep_basis)
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) w -= b.dot(w) * b;
    t.alpha.push_back(a);
    steps = j + 1;
    const double b = w.norm();
    auto [theta, y] = t.lowest(steps);
    const double estimate = b * std::abs(y[steps - 1]);
    if (b <= 1e-14 * scale || steps == dim - static_cast<Eigen::Index>(found.size())) break;
    // Stop once the Ritz residual is small, or (without reorthogonalization)
    // once theta has settled to rounding level, before spurious copies form.
    if (estimate <= 0.1 * opts.tolerance * scale) break;
    if (!keep_basis && j > 10 && std::abs(theta - prev_theta) <= 1e-14 * scale) break;
    prev_theta = theta;
    t.beta.push_back(b);
    v_prev = std::move(v);
    v = w / b;
  }

  const Eigen::VectorXd y = t.lowest(steps).second;
  Amplitudes x = Amplitudes::Zero(dim);
  if (keep_basis) {
    for (int k = 0; k < steps; ++k) x += y[k] * basis[static_cast<std::size_t>(k)];
  } else {
    // Second pass: regenerate the same vectors from the stored coefficients.
    v = start;
    project_out(v, found);
    v.normalize();
    v_prev.setZero();
    for (int k = 0; k < steps; ++k) {
      x += y[k] * v;
      if (k + 1 == steps) break;
      H.apply(v.data(), w.data());
      ++matvecs;
      project_out(w, found);
      w -= t.alpha[static_cast<std::size_t>(k)] * v;
      if (k > 0) w -= t.beta[static_cast<std::size_t>(k - 1)] * v_prev;
      v_prev = std::move(v);
      v = w / t.beta[static_cast<std::size_t>(k)];
    }
  }
  project_out(x, found);
  x.normalize();
  return x;
}

Eigenpair lowest_in_complement(const CompiledOperator& H, const Found& found, std::uint64_t seed,
                               const LanczosOptions& opts) {
  const double scale = std::max(H.norm_bound(), 1e-300);
  Eigenpair out;
  Amplitudes x = start_vector(H.n_sites(), seed);
  Amplitudes hx(x.size());
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    x = lanczos_cycle(H, found, x, opts, scale, out.matvecs);
    H.apply(x.data(), hx.data());
    ++out.matvecs;
    project_out(hx, found);
    out.energy = x.dot(hx).real();
    out.residual = (hx - out.energy * x).norm();
    if (out.residual <= opts.tolerance * scale) {
      out.state = StateVector::normalized(H.n_sites(), std::move(x));
      return out;
    }
  }
  throw ConvergenceError("Lanczos did not converge: residual " + std::to_string(out.residual) + " after " +
                         std::to_string(opts.max_restarts) + " restarts");
}

}  // namespace

Amplitudes start_vector(int n_sites, std::uint64_t seed) {
  const Eigen::Index dim = hilbert_dimension(n_sites);
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0; };
  Amplitudes v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double re = uniform();
    const double im = uniform();
    v[k] = cplx(re, im);
  }
  v.normalize();
  return v;
}

Eigenpair ground_state(const CompiledOperator& H, const LanczosOptions& opts) {
  return lowest_in_complement(H, {}, opts.seed, opts);
}

Eigenpair ground_state(const PauliSum& H, const LanczosOptions& opts) {
  return ground_state(CompiledOperator(H), opts);
}

std::vector<Eigenpair> low_eigenpairs(const CompiledOperator& H, int k, const LanczosOptions& opts) {
  if (k < 1 || k > H.dimension()) throw std::invalid_argument("low_eigenpairs: k out of range");
  std::vector<Eigenpair> out;
  out.reserve(static_cast<std::size_t>(k));
  Found found;
  for (int i = 0; i < k; ++i) {
    out.push_back(lowest_in_complement(H, found, opts.seed + static_cast<std::uint64_t>(i), opts));
    found.clear();
    for (const auto& e : out) found.push_back(&e.state.amplitudes());
  }
  std::stable_sort(out.begin(), out.end(), [](const Eigenpair& a, const Eigenpair& b) { return a.energy < b.energy; });
  return out;
}

std::vector<double> low_spectrum(const PauliSum& H, int k, const LanczosOptions& opts) {
  if (k < 2) throw std::invalid_argument("low_spectrum needs k >= 2");
  std::vector<double> e;
  for (const auto& p : low_eigenpairs(CompiledOperator(H), k, opts)) e.push_back(p.energy);
  return e;
}

}  // namespace kcd
