#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "kcd/model.hpp"
#include "kcd/observables.hpp"
#include "kcd/pauli.hpp"
#include "kcd/state.hpp"
#include "oracles.hpp"

using namespace kcd;

namespace {

PauliString random_string(int n, std::mt19937_64& g) {
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  return PauliString(n, g() & mask, g() & mask, static_cast<int>(g() % 4));
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

oracle::Mat dense_string(const PauliString& s) { return oracle::dense(PauliSum::from_terms(s.n_sites(), {{1.0, s}})); }

}  // namespace

TEST(PauliString, SingleSiteProducts) {
  const auto x = PauliString::parse(1, "X0");
  const auto y = PauliString::parse(1, "Y0");
  const auto xy = multiply(x, y);
  EXPECT_EQ(xy.letters(), "Z0");
  EXPECT_EQ(xy.phase_factor(), cplx(0, 1));
  const auto xx = multiply(x, x);
  EXPECT_TRUE(xx.is_identity());
  EXPECT_EQ(xx.phase(), 0);
}

TEST(PauliString, TwoSiteProductMatchesDense) {
  const auto a = PauliString::parse(2, "X0 Z1");
  const auto b = PauliString::parse(2, "Y0 Y1");
  const auto ab = multiply(a, b);
  EXPECT_EQ(ab.letters(), "Z0 X1");
  EXPECT_EQ(ab.phase_factor(), cplx(1, 0));
  EXPECT_LT(max_abs(dense_string(a) * dense_string(b) - dense_string(ab)), 1e-15);
}

TEST(PauliString, GroupClosureAgainstDense) {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_string(4, g);
    const auto b = random_string(4, g);
    const auto ab = multiply(a, b);
    EXPECT_LT(max_abs(dense_string(a) * dense_string(b) - dense_string(ab)), 1e-14);
    const bool dense_commute = max_abs(dense_string(a) * dense_string(b) - dense_string(b) * dense_string(a)) < 1e-14;
    EXPECT_EQ(commutes(a, b), dense_commute);
  }
}

TEST(PauliString, Associativity) {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_string(6, g), b = random_string(6, g), c = random_string(6, g);
    EXPECT_EQ(multiply(multiply(a, b), c), multiply(a, multiply(b, c)));
  }
}

TEST(PauliString, SquareIsSignedIdentity) {
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_string(8, g);
    const auto aa = multiply(a, a);
    EXPECT_TRUE(aa.is_identity());
    EXPECT_EQ(aa.phase() % 2, 0);
  }
}

TEST(PauliString, MismatchedSizesThrow) {
  EXPECT_THROW(multiply(PauliString(2), PauliString(3)), std::invalid_argument);
  EXPECT_THROW(PauliString::parse(2, "X2"), std::out_of_range);
  EXPECT_THROW(PauliString::parse(2, "Q0"), std::invalid_argument);
}

TEST(PauliSum, CanonicalFormMergesAndDrops) {
  const auto s = PauliString::parse(2, "X0");
  const auto is = PauliString(2, s.x_mask(), s.z_mask(), 1);  // i X0
  const auto sum = PauliSum::from_terms(2, {{1.0, s}, {cplx(0, -1), is}, {2.0, PauliString::parse(2, "Z1")}});
  ASSERT_EQ(sum.size(), 2u);
  EXPECT_EQ(sum.coefficient(PauliString::parse(2, "Z1")), cplx(2.0));
  EXPECT_EQ(sum.coefficient(s), cplx(2.0)) << "1 + (-i)(i) = 2";
  const auto tiny = PauliSum::from_terms(1, {{1.0, PauliString::parse(1, "X0")}, {1e-13, PauliString::parse(1, "Z0")}});
  EXPECT_EQ(tiny.size(), 1u);
}

TEST(Commutator, SelfCommutatorIsEmpty) {
  const auto c = builtin_cluster("honeycomb8");
  const auto hk = build_kitaev(c, 1.0);
  EXPECT_TRUE(commutator(hk, hk).empty());
  const auto h0 = build_h0(c, ModelParams{1.0, 0.7, 0.1, 0.3});
  EXPECT_TRUE(commutator(h0, h0).empty());
}

TEST(Commutator, ZWithX) {
  const auto z = PauliSum::single(PauliString::parse(1, "Z0"));
  const auto x = PauliSum::single(PauliString::parse(1, "X0"));
  const auto c = commutator(z, x);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.coefficient(PauliString::parse(1, "Y0")), cplx(0, 2));
}

TEST(Commutator, AntisymmetricAndMatchesDense) {
  const auto c = builtin_cluster("honeycomb8");
  const auto hk = build_kitaev(c, 1.3);
  const auto hm = build_zeeman(c, 0.4);
  const auto ab = commutator(hk, hm);
  const auto ba = commutator(hm, hk);
  EXPECT_TRUE((ab + ba).empty());
  const auto dk = oracle::kitaev(c, 1.3);
  const auto dm = oracle::zeeman(c, 0.4);
  EXPECT_LT(max_abs(oracle::dense(ab) - (dk * dm - dm * dk)), 1e-12);
}

TEST(Commutator, KitaevZeemanAgainstAppendixTerms) {
  // The printed X + Y + Z pieces carry the opposite overall sign to
  // [H_k, H_m] for H_k = -J sum sigma sigma; the link structure agrees.
  const auto c = builtin_cluster("honeycomb8");
  const double J = 1.0, B = 0.9;
  const auto comm = oracle::dense(commutator(build_kitaev(c, J), build_zeeman(c, B)));
  EXPECT_LT(max_abs(comm + oracle::appendix_xyz(c, J, B)), 1e-12);
}

TEST(NormalizedTrace, Basics) {
  EXPECT_EQ(normalized_trace(PauliSum::identity(3, cplx(2, 1))), cplx(2, 1));
  EXPECT_EQ(normalized_trace(PauliSum::single(PauliString::parse(3, "X1"))), cplx(0));
  const auto c = builtin_cluster("honeycomb8");
  const auto hm = build_zeeman(c, 1.0);
  EXPECT_NEAR(normalized_trace(multiply(hm, hm)).real(), 24.0, 1e-12);
  EXPECT_NEAR(normalized_trace_product(hm, hm).real(), 24.0, 1e-12);
  const auto d = oracle::zeeman(c, 1.0);
  EXPECT_NEAR((d * d).trace().real() / 256.0, 24.0, 1e-10);
}

TEST(NormalizedTrace, CommutatorIsTraceless) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PauliSum::Term> ta, tb;
    for (int k = 0; k < 6; ++k) {
      ta.push_back({cplx(static_cast<double>(g() % 7) - 3, 1), random_string(5, g)});
      tb.push_back({cplx(1, static_cast<double>(g() % 5) - 2), random_string(5, g)});
    }
    const auto a = PauliSum::from_terms(5, ta), b = PauliSum::from_terms(5, tb);
    EXPECT_NEAR(std::abs(normalized_trace(commutator(a, b))), 0.0, 1e-13);
  }
}

TEST(Apply, IdentityAndBitFlip) {
  const auto v = oracle::random_state(5, 1);
  EXPECT_LT((kcd::apply(PauliSum::identity(5), v) - v).norm(), 1e-15);
  const auto e0 = StateVector::basis(5, 0);
  const auto w = kcd::apply(PauliSum::single(PauliString::parse(5, "X0")), e0.amplitudes());
  EXPECT_EQ(w[1], cplx(1));
  EXPECT_NEAR(w.norm(), 1.0, 1e-15);
}

TEST(Apply, KitaevMatchesDenseOracle) {
  const auto c = builtin_cluster("honeycomb8");
  const auto hk = build_kitaev(c, 1.0);
  const auto v = oracle::random_state(8, 2);
  EXPECT_LT((kcd::apply(hk, v) - oracle::kitaev(c, 1.0) * v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Apply, CdHamiltonianMatchesDenseOracle) {
  const auto c = builtin_cluster("honeycomb8");
  const auto h = build_cd_hamiltonian(c, ModelParams{1.0, 2.0, 0.05, 0.6}, 1.7);
  const auto v = oracle::random_state(8, 3);
  EXPECT_LT((kcd::apply(h, v) - oracle::dense(h) * v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Apply, WideStringsUseTheirOwnBlock) {
  // Z masks wider than a table block, mixed with narrow ones.
  const int n = 12;
  std::mt19937_64 g(9);
  std::vector<PauliSum::Term> terms;
  for (int k = 0; k < 40; ++k) terms.push_back({cplx(1.0 / (k + 1), 0.1 * k), random_string(n, g)});
  terms.push_back({0.5, PauliString(n, 0x5, 0xFFF)});
  terms.push_back({0.25, PauliString(n, 0x5, 0x3)});
  const auto a = PauliSum::from_terms(n, terms);
  const auto v = oracle::random_state(n, 4);
  EXPECT_LT((kcd::apply(a, v) - to_dense(a) * v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Apply, Linearity) {
  const auto c = builtin_cluster("honeycomb12");
  const CompiledOperator h(build_h0(c, ModelParams{1.0, 3.0, 0.01, 0.5}));
  const auto u = oracle::random_state(12, 5), v = oracle::random_state(12, 6);
  const cplx a(0.3, -1.1), b(2.0, 0.4);
  EXPECT_LT((h.apply(Amplitudes(a * u + b * v)) - (a * h.apply(u) + b * h.apply(v))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Apply, Deterministic) {
  const auto c = builtin_cluster("honeycomb12");
  const CompiledOperator h(build_cd_hamiltonian(c, ModelParams{1.0, 50.0, 0.001, 0.5}, 2.0));
  const auto v = oracle::random_state(12, 7);
  const Amplitudes w1 = h.apply(v), w2 = h.apply(v);
  EXPECT_EQ(std::memcmp(w1.data(), w2.data(), sizeof(cplx) * static_cast<std::size_t>(w1.size())), 0);
}

TEST(Expectation, HermitianIsReal) {
  const auto c = builtin_cluster("honeycomb12");
  const auto h = build_cd_hamiltonian(c, ModelParams{1.0, 5.0, 0.01, 0.3}, 4.0);
  ASSERT_TRUE(h.is_hermitian());
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto v = oracle::random_state(12, 100 + s);
    EXPECT_LT(std::abs(expectation(h, v).imag()), 1e-10);
    EXPECT_NEAR(expectation(h, v).real(), v.dot(kcd::apply(h, v)).real(), 1e-10);
  }
}

TEST(FluxOperator, CommutesWithKitaevOnEveryCluster) {
  for (const auto& name : builtin_cluster_names()) {
    const auto c = builtin_cluster(name);
    const auto hk = build_kitaev(c, 1.0);
    for (const auto& p : c.plaquettes()) {
      const auto w = flux_operator(c.n_sites(), p);
      EXPECT_TRUE(commutator(w, hk).empty()) << name;
      const auto ww = multiply(w, w);
      ASSERT_EQ(ww.size(), 1u);
      EXPECT_EQ(normalized_trace(ww), cplx(1));
    }
  }
}

TEST(ToDense, SmallExamplesAndGuard) {
  const auto z = to_dense(PauliSum::single(PauliString::parse(1, "Z0")));
  EXPECT_EQ(z(0, 0), cplx(1));
  EXPECT_EQ(z(1, 1), cplx(-1));
  const auto hk = to_dense(build_kitaev(oracle::two_site_z(), 1.0));
  EXPECT_LT(max_abs(hk - oracle::kron_string("ZZ") * -1.0), 1e-15);
  EXPECT_THROW(to_dense(PauliSum(13)), std::invalid_argument);
}

TEST(ToDense, AgreesWithKroneckerOracle) {
  const auto c = builtin_cluster("kitaev4");
  const auto h = build_cd_hamiltonian(c, ModelParams{1.0, 1.5, 0.1, 0.4}, 0.8);
  EXPECT_LT(max_abs(to_dense(h) - oracle::dense(h)), 1e-13);
}

TEST(PauliSum, TextRoundTrip) {
  const auto c = builtin_cluster("honeycomb8");
  const auto a = build_gauge_potential(c, ModelParams{1.0, 2.0, 0.01, 0.7}).op;
  const auto b = PauliSum::from_text(8, a.to_text());
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LT((a - b).max_abs_coeff(), 1e-16);
}

TEST(StateVector, NormIsChecked) {
  Amplitudes v = Amplitudes::Ones(4);
  EXPECT_THROW(StateVector::from_amplitudes(2, v), std::invalid_argument);
  EXPECT_NEAR(StateVector::normalized(2, v).norm(), 1.0, 1e-15);
  EXPECT_THROW(StateVector::normalized(2, Amplitudes::Zero(4)), std::invalid_argument);
  EXPECT_THROW(StateVector::from_amplitudes(3, v.normalized()), std::invalid_argument);
}
