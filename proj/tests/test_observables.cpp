#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "kcd/eigensolver.hpp"
#include "kcd/model.hpp"
#include "kcd/observables.hpp"
#include "oracles.hpp"

using namespace kcd;

namespace {

const double kLn2 = std::log(2.0);

oracle::Vec bell_on(int n, int i, int j) {
  oracle::Vec v = oracle::Vec::Zero(Eigen::Index{1} << n);
  v[0] = std::sqrt(0.5);
  v[(Eigen::Index{1} << i) | (Eigen::Index{1} << j)] = std::sqrt(0.5);
  return v;
}

std::vector<int> complement(int n, const std::vector<int>& a) {
  std::vector<int> out;
  for (int s = 0; s < n; ++s)
    if (std::find(a.begin(), a.end(), s) == a.end()) out.push_back(s);
  return out;
}

}  // namespace

TEST(Fidelity, Properties) {
  const oracle::Vec a = oracle::random_state(6, 1), b = oracle::random_state(6, 2);
  EXPECT_NEAR(fidelity(a, a), 1.0, 1e-14);
  EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-15);
  EXPECT_NEAR(fidelity(a, cplx(0.6, 0.8) * b), fidelity(a, b), 1e-15);
  EXPECT_GE(fidelity(a, b), 0.0);
  EXPECT_LE(fidelity(a, b), 1.0);
  EXPECT_EQ(fidelity(StateVector::basis(3, 1), StateVector::basis(3, 2)), 0.0);
  EXPECT_LE(fidelity(a, a * (1 + 1e-12)), 1.0);
  EXPECT_THROW(fidelity(a, oracle::random_state(5, 2)), std::invalid_argument);
}

TEST(Entropy, ProductStateIsZero) {
  const Amplitudes psi = StateVector::basis(8, 0b10110010).amplitudes();
  for (const std::vector<int>& a : {std::vector<int>{0}, {1, 4, 7}, {0, 1, 2, 3}})
    EXPECT_NEAR(entanglement_entropy(psi, 8, a), 0.0, 1e-12);
}

TEST(Entropy, BellPair) {
  const Amplitudes psi = bell_on(4, 0, 3);
  EXPECT_NEAR(entanglement_entropy(psi, 4, std::vector<int>{0}), kLn2, 1e-12);
  EXPECT_NEAR(entanglement_entropy(psi, 4, std::vector<int>{3, 1}), kLn2, 1e-12);
  EXPECT_NEAR(entanglement_entropy(psi, 4, std::vector<int>{0, 3}), 0.0, 1e-12);
  EXPECT_NEAR(entanglement_entropy(psi, 4, std::vector<int>{1, 2}), 0.0, 1e-12);
}

TEST(Entropy, MatchesPartialTraceOracle) {
  const int n = 8;
  const oracle::Vec psi = oracle::random_state(n, 11);
  for (const std::vector<int>& a : {std::vector<int>{2}, {0, 5}, {7, 1, 3}, {0, 2, 4, 6}, {1, 2, 3, 4, 5}}) {
    const double ref = oracle::von_neumann(oracle::reduced_density_matrix(psi, n, a));
    EXPECT_NEAR(entanglement_entropy(psi, n, a), ref, 1e-10);
    EXPECT_LE(entanglement_entropy(psi, n, a), static_cast<double>(a.size()) * kLn2 + 1e-12);
  }
}

TEST(Entropy, ComplementSymmetry) {
  const int n = 10;
  const oracle::Vec psi = oracle::random_state(n, 5);
  for (const std::vector<int>& a : {std::vector<int>{3}, {0, 9}, {1, 4, 5, 8}}) {
    EXPECT_NEAR(entanglement_entropy(psi, n, a), entanglement_entropy(psi, n, complement(n, a)), 1e-10);
  }
}

TEST(Entropy, RejectsBadSubsets) {
  const Amplitudes psi = StateVector::basis(4, 0).amplitudes();
  EXPECT_THROW(entanglement_entropy(psi, 4, std::vector<int>{4}), std::out_of_range);
  EXPECT_THROW(entanglement_entropy(psi, 4, std::vector<int>{1, 1}), std::invalid_argument);
  EXPECT_THROW(entanglement_entropy(psi, 5, std::vector<int>{1}), std::invalid_argument);
}

TEST(TopologicalEntropy, ProductStateIsZero) {
  const auto c = builtin_cluster("honeycomb12");
  const auto parts = cluster_partitions(c);
  const auto te = topological_entropy(StateVector::basis(12, 0x5a3).amplitudes(), 12, parts);
  EXPECT_NEAR(te.gamma, 0.0, 1e-12);
}

TEST(TopologicalEntropy, CombinesSubsetEntropies) {
  const auto c = builtin_cluster("honeycomb8");
  const auto parts = cluster_partitions(c);
  const oracle::Vec psi = oracle::random_state(8, 3);
  const auto te = topological_entropy(psi, 8, parts);
  auto s = [&](std::vector<int> a) { return oracle::von_neumann(oracle::reduced_density_matrix(psi, 8, a)); };
  auto cat = [](std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const double ref = -(s(parts.a) + s(parts.b) + s(parts.c) - s(cat(parts.a, parts.b)) - s(cat(parts.b, parts.c)) -
                       s(cat(parts.a, parts.c)) + s(cat(cat(parts.a, parts.b), parts.c)));
  EXPECT_NEAR(te.gamma, ref, 1e-10);
  EXPECT_NEAR(te.entropies[0], s(parts.a), 1e-10);
}

TEST(TopologicalEntropy, BellPairsAcrossRegionsCancel) {
  // Pairs straddling A|B, B|C and A|C give area-law terms only.
  const auto parts = cluster_partitions(builtin_cluster("honeycomb8"));
  const int n = 8;
  oracle::Vec psi = bell_on(n, parts.a[0], parts.b[0]);
  const oracle::Vec other = bell_on(n, parts.b[1], parts.c[0]);
  // Tensor the two pairs: amplitude is a product over disjoint bit sets.
  oracle::Vec both = oracle::Vec::Zero(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    for (Eigen::Index j = 0; j < other.size(); ++j)
      if (psi[i] != 0.0 && other[j] != 0.0 && (i & j) == 0) both[i | j] += psi[i] * other[j];
  EXPECT_NEAR(topological_entropy(both, n, parts).gamma, 0.0, 1e-12);
}

TEST(TopologicalEntropy, MissingPartitionThrows) {
  EXPECT_THROW(cluster_partitions(builtin_cluster("kitaev4")), std::invalid_argument);
}

TEST(Flux, OperatorMatchesLabels) {
  const auto c = builtin_cluster("honeycomb8");
  for (const auto& p : c.plaquettes()) {
    const auto w = flux_operator(8, p);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w.terms()[0].coeff, cplx(1));
    EXPECT_EQ(w.terms()[0].string.weight(), 6);
    std::string letters(8, 'I');
    for (const auto& s : p.sites) letters[static_cast<std::size_t>(s.site)] = static_cast<char>(std::toupper(to_char(s.label)));
    const oracle::Vec psi = oracle::random_state(8, 9);
    const cplx ref = psi.dot(oracle::kron_string(letters) * psi);
    EXPECT_NEAR(flux_expectation(psi, 8, p), ref.real(), 1e-12);
  }
}

TEST(Flux, SquaresToIdentityAndCommutesWithKitaev) {
  const auto c = builtin_cluster("honeycomb12");
  const auto hk = build_kitaev(c, 1.0);
  for (const auto& p : c.plaquettes()) {
    const auto w = flux_operator(12, p);
    EXPECT_TRUE((multiply(w, w) - PauliSum::identity(12)).empty());
    EXPECT_TRUE(commutator(w, hk).empty());
  }
}

TEST(Flux, BiasedKitaevGroundStateIsFluxFree) {
  const auto c = builtin_cluster("honeycomb12");
  // The bare ground level mixes flux sectors on this torus; a small commuting
  // bias -0.05 sum W_p selects W_p = +1 without changing the eigenvectors.
  PauliSum h = build_kitaev(c, 1.0);
  for (const auto& p : c.plaquettes()) h -= flux_operator(12, p) * 0.05;
  const auto gs = ground_state(h);
  for (const auto& p : c.plaquettes()) EXPECT_NEAR(flux_expectation(gs.state.amplitudes(), 12, p), 1.0, 1e-6);
}

TEST(SupportSize, EigenstateAndSuperposition) {
  const auto c = builtin_cluster("honeycomb8");
  const auto h = build_h0(c, ModelParams{1.0, 0.4, 0.01, 0.0});
  const auto basis = spectral_basis(h);
  ASSERT_EQ(basis.mode, SupportMode::exact);
  const Amplitudes e0 = basis.vectors.col(0);
  EXPECT_NEAR(support_size(e0, basis).xi, 1.0, 1e-10);

  // Two eigenstates from different levels, equal weight.
  Eigen::Index k = 1;
  while (basis.energies[static_cast<std::size_t>(k)] - basis.energies[0] < 1e-6) ++k;
  const Amplitudes sup = (basis.vectors.col(0) + basis.vectors.col(k)) / std::sqrt(2.0);
  EXPECT_NEAR(support_size(sup, basis).xi, 2.0, 1e-10);
  EXPECT_NEAR(support_size(sup, h).xi, 2.0, 1e-10);
}

TEST(SupportSize, DegenerateLevelCountsOnce) {
  // -Z0 on two sites: the ground level is twofold.
  const auto h = PauliSum::single(PauliString::from_letters(2, {{0, 'Z'}}), -1.0);
  oracle::Vec psi = oracle::Vec::Zero(4);
  psi[0] = std::sqrt(0.5);
  psi[2] = std::sqrt(0.5);
  EXPECT_NEAR(support_size(psi, h).xi, 1.0, 1e-12);
}

TEST(SupportSize, RandomStateBounds) {
  const auto h = build_h0(builtin_cluster("honeycomb8"), ModelParams{1.0, 0.7, 0.01, 0.0});
  const auto s = support_size(oracle::random_state(8, 21), h);
  EXPECT_GE(s.xi, 1.0);
  EXPECT_LE(s.xi, 256.0);
  EXPECT_NEAR(s.captured, 1.0, 1e-10);
}

TEST(SupportSize, TruncatedIntervalBracketsExact) {
  const auto c = builtin_cluster("honeycomb8");
  const ModelParams p{1.0, 0.5, 0.01, 0.0};
  const auto h = build_h0(c, p);
  // A state close to the low end of the spectrum, as after a good ramp.
  const auto exact = spectral_basis(h);
  Amplitudes psi = Amplitudes::Zero(256);
  for (int k = 0; k < 256; ++k) psi += std::exp(-0.3 * k) * exact.vectors.col(k);
  psi.normalize();
  const double xi = support_size(psi, exact).xi;

  SupportOptions opts;
  opts.exact_max_sites = 0;
  opts.truncated_states = 12;
  const auto t = support_size(psi, h, opts);
  EXPECT_EQ(t.mode, SupportMode::truncated_interval);
  EXPECT_EQ(t.states, 12);
  EXPECT_LT(t.captured, 1.0);
  EXPECT_LE(t.xi_low, xi + 1e-9);
  EXPECT_GE(t.xi_high, xi - 1e-9);
  EXPECT_EQ(t.xi, t.xi_low);
}

TEST(SupportSize, ModeNames) {
  EXPECT_EQ(to_string(SupportMode::exact), "exact");
  EXPECT_EQ(to_string(SupportMode::truncated_interval), "truncated-interval");
}

TEST(EnergyOffset, GroundStateIsZero) {
  const auto h = build_h0(builtin_cluster("honeycomb8"), ModelParams{1.0, 0.3, 0.01, 0.2});
  const auto gs = ground_state(h);
  EXPECT_NEAR(energy_offset(gs.state.amplitudes(), h, gs.energy), 0.0, 1e-9);
  EXPECT_GT(energy_offset(oracle::random_state(8, 4), h, gs.energy), 0.1);
}
