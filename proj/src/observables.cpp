#include "kcd/observables.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kcd/dense.hpp"
#include "kcd/model.hpp"

namespace kcd {

namespace {

void check_dims(const Amplitudes& a, const Amplitudes& b) {
  if (a.size() != b.size()) throw std::invalid_argument("state dimensions differ");
}

std::uint64_t subset_mask(int n_sites, std::span<const int> sites) {
  std::uint64_t m = 0;
  for (int s : sites) {
    if (s < 0 || s >= n_sites) throw std::out_of_range("entropy subset site out of range");
    const std::uint64_t bit = std::uint64_t{1} << s;
    if (m & bit) throw std::invalid_argument("entropy subset repeats a site");
    m |= bit;
  }
  return m;
}

// Packs the bits of v selected by mask into the low bits.
std::uint64_t gather(std::uint64_t v, std::uint64_t mask) {
  std::uint64_t out = 0;
  for (int k = 0; mask; ++k, mask &= mask - 1)
    if (v & mask & (~mask + 1)) out |= std::uint64_t{1} << k;
  return out;
}

std::vector<int> join(std::initializer_list<const std::vector<int>*> parts) {
  std::vector<int> out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

// Sums weights over runs of energies closer than tol.
std::vector<double> lump(const std::vector<double>& energies, const std::vector<double>& weights, double tol) {
  std::vector<double> out;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    if (k > 0 && energies[k] - energies[k - 1] <= tol)
      out.back() += weights[k];
    else
      out.push_back(weights[k]);
  }
  return out;
}

double inverse_participation(const std::vector<double>& w) {
  double s = 0;
  for (double x : w) s += x * x;
  return s;
}

}  // namespace

double fidelity(const Amplitudes& psi, const Amplitudes& phi) {
  check_dims(psi, phi);
  return std::clamp(std::norm(psi.dot(phi)), 0.0, 1.0);
}

double fidelity(const StateVector& psi, const StateVector& phi) { return fidelity(psi.amplitudes(), phi.amplitudes()); }

double entanglement_entropy(const Amplitudes& psi, int n_sites, std::span<const int> sites) {
  if (psi.size() != hilbert_dimension(n_sites)) throw std::invalid_argument("state does not match site count");
  const std::uint64_t in = subset_mask(n_sites, sites);
  const int k = std::popcount(in);
  if (k == 0 || k == n_sites) throw std::invalid_argument("entropy subset must be non-empty and proper");
  if (std::min(k, n_sites - k) > kMaxEntropySites)
    throw std::invalid_argument("entropy cut too large: smaller side has " + std::to_string(std::min(k, n_sites - k)) +
                                " sites");
  const std::uint64_t all = (std::uint64_t{1} << n_sites) - 1;
  const std::uint64_t out = all & ~in;

  // Rows index the smaller side so the SVD works on the short dimension.
  const bool subset_rows = k <= n_sites - k;
  const std::uint64_t row_mask = subset_rows ? in : out;
  const std::uint64_t col_mask = subset_rows ? out : in;
  const Eigen::Index rows = Eigen::Index{1} << std::popcount(row_mask);
  const Eigen::Index cols = Eigen::Index{1} << std::popcount(col_mask);
  Eigen::MatrixXcd m(rows, cols);
  for (std::uint64_t i = 0; i <= all; ++i)
    m(static_cast<Eigen::Index>(gather(i, row_mask)), static_cast<Eigen::Index>(gather(i, col_mask))) =
        psi[static_cast<Eigen::Index>(i)];

  const Eigen::VectorXd s = singular_values(std::move(m));
  double entropy = 0;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const double p = s[j] * s[j];
    if (p > kEntropyClip) entropy -= p * std::log(p);
  }
  return entropy;
}

double entanglement_entropy(const StateVector& psi, std::span<const int> sites) {
  return entanglement_entropy(psi.amplitudes(), psi.n_sites(), sites);
}

Partitions cluster_partitions(const HoneycombCluster& cluster) {
  Partitions p;
  for (auto [name, dst] : {std::pair{"A", &p.a}, std::pair{"B", &p.b}, std::pair{"C", &p.c}}) {
    const Partition* part = cluster.find_partition(name);
    if (!part) throw std::invalid_argument(std::string("cluster has no partition ") + name);
    *dst = part->sites;
  }
  return p;
}

TopologicalEntropy topological_entropy(const Amplitudes& psi, int n_sites, const Partitions& parts) {
  if (parts.a.empty() || parts.b.empty() || parts.c.empty()) throw std::invalid_argument("empty partition");
  const std::vector<int> subsets[7] = {parts.a,
                                       parts.b,
                                       parts.c,
                                       join({&parts.a, &parts.b}),
                                       join({&parts.b, &parts.c}),
                                       join({&parts.a, &parts.c}),
                                       join({&parts.a, &parts.b, &parts.c})};
  TopologicalEntropy out;
  for (int k = 0; k < 7; ++k) out.entropies[static_cast<std::size_t>(k)] = entanglement_entropy(psi, n_sites, subsets[k]);
  const auto& s = out.entropies;
  out.gamma = -(s[0] + s[1] + s[2] - s[3] - s[4] - s[5] + s[6]);
  return out;
}

PauliSum flux_operator(int n_sites, const Plaquette& p) {
  PauliString w(n_sites);
  for (const auto& ps : p.sites) w = w.with_letter(ps.site, static_cast<char>(std::toupper(to_char(ps.label))));
  return PauliSum::single(w);
}

double flux_expectation(const Amplitudes& psi, int n_sites, const Plaquette& p) {
  return expectation(flux_operator(n_sites, p), psi).real();
}

std::string_view to_string(SupportMode m) {
  return m == SupportMode::exact ? "exact" : "truncated-interval";
}

SpectralBasis spectral_basis(const PauliSum& h_final, const SupportOptions& opts) {
  const int n = h_final.n_sites();
  SpectralBasis b;
  b.dimension = hilbert_dimension(n);
  if (n <= std::min(opts.exact_max_sites, kMaxDenseSites)) {
    auto eig = hermitian_eigen(to_dense(h_final));
    b.energies.assign(eig.values.data(), eig.values.data() + eig.values.size());
    b.vectors = std::move(eig.vectors);
    b.degeneracy_tolerance = kDegeneracyTolerance * (b.energies.back() - b.energies.front());
    return b;
  }
  const std::size_t vec_bytes = static_cast<std::size_t>(b.dimension) * sizeof(cplx);
  const int m = std::min<long long>(opts.truncated_states, static_cast<long long>(opts.memory_budget / vec_bytes));
  if (m < 1) throw std::invalid_argument("memory budget leaves no room for eigenstates");
  const CompiledOperator h(h_final);
  b.mode = SupportMode::truncated_interval;
  for (auto& p : low_eigenpairs(h, m, opts.lanczos)) {
    b.energies.push_back(p.energy);
    b.lowest.push_back(p.state.amplitudes());
  }
  b.degeneracy_tolerance = 10 * opts.lanczos.tolerance * h.norm_bound();
  return b;
}

SupportSize support_size(const Amplitudes& psi, const SpectralBasis& basis) {
  if (psi.size() != basis.dimension) throw std::invalid_argument("state does not match spectral basis");
  SupportSize out;
  out.mode = basis.mode;
  std::vector<double> w(basis.energies.size());
  if (basis.mode == SupportMode::exact) {
    const Eigen::VectorXcd a = basis.vectors.adjoint() * psi;
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::norm(a[static_cast<Eigen::Index>(k)]);
  } else {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::norm(basis.lowest[k].dot(psi));
  }
  double captured = 0;
  for (double x : w) captured += x;
  const double ipr = inverse_participation(lump(basis.energies, w, basis.degeneracy_tolerance));
  out.states = static_cast<int>(w.size());
  if (basis.mode == SupportMode::exact) {
    out.xi = out.xi_low = out.xi_high = 1.0 / ipr;
    out.captured = captured;
    return out;
  }
  const double rest = std::max(0.0, 1.0 - captured);
  const double others = std::max(1.0, static_cast<double>(basis.dimension) - static_cast<double>(w.size()));
  out.xi_low = 1.0 / (ipr + rest * rest);
  out.xi_high = 1.0 / (ipr + rest * rest / others);
  out.xi = out.xi_low;
  out.captured = captured;
  return out;
}

SupportSize support_size(const Amplitudes& psi, const PauliSum& h_final, const SupportOptions& opts) {
  if (psi.size() != hilbert_dimension(h_final.n_sites())) throw std::invalid_argument("state does not match operator");
  return support_size(psi, spectral_basis(h_final, opts));
}

double energy_offset(const Amplitudes& psi, const PauliSum& h_final, double e_ground) {
  return expectation(h_final, psi).real() - e_ground;
}

}  // namespace kcd
