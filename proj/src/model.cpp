#include "kcd/model.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kcd/dense.hpp"

namespace kcd {

namespace {

char letter(LinkType t) { return static_cast<char>(std::toupper(to_char(t))); }

PauliString pair(int n, int i, char a, int j, char b) { return PauliString::from_letters(n, {{i, a}, {j, b}}); }

// H_m at unit field.
PauliSum unit_zeeman(const HoneycombCluster& c) { return build_zeeman(c, 1.0); }

}  // namespace

void ModelParams::check() const {
  if (!(J > 0)) throw std::invalid_argument("J must be positive");
  if (!(B >= 0)) throw std::invalid_argument("B must be non-negative");
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  if (!(lambda >= 0 && lambda <= 1)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (!std::isfinite(J) || !std::isfinite(B) || !std::isfinite(delta))
    throw std::invalid_argument("model parameters must be finite");
}

PauliSum build_kitaev(const HoneycombCluster& cluster, double J) {
  const int n = cluster.n_sites();
  std::vector<PauliSum::Term> terms;
  for (const auto& l : cluster.links()) {
    const char g = letter(l.type);
    terms.push_back({-J, pair(n, l.i, g, l.j, g)});
  }
  return PauliSum::from_terms(n, std::move(terms));
}

PauliSum build_zeeman(const HoneycombCluster& cluster, double B) {
  const int n = cluster.n_sites();
  std::vector<PauliSum::Term> terms;
  for (int i = 0; i < n; ++i)
    for (char a : {'X', 'Y', 'Z'}) terms.push_back({B, PauliString::from_letters(n, {{i, a}})});
  return PauliSum::from_terms(n, std::move(terms));
}

PauliSum build_h0(const HoneycombCluster& cluster, const ModelParams& params) {
  params.check();
  const PauliSum hk = build_kitaev(cluster, params.J);
  const PauliSum hm = build_zeeman(cluster, params.B);
  return linear_combination({{1.0, &hk}, {params.field_scale(), &hm}});
}

double alpha1_closed_form(const ModelParams& params) {
  params.check();
  const double s = params.field_scale();
  return -0.25 / (9.0 * s * s * params.B * params.B + 5.0 * params.J * params.J);
}

double alpha1_numeric(const HoneycombCluster& cluster, const ModelParams& params) {
  params.check();
  // With H_m = B M: G = B (M - alpha (b [M,[M,K]] + [K,[M,K]])) for b = s B,
  // so alpha depends on B only through b.
  const double b = params.field_scale() * params.B;
  const PauliSum hk = build_kitaev(cluster, params.J);
  const PauliSum hm = unit_zeeman(cluster);
  const PauliSum mk = commutator(hm, hk);
  const PauliSum outer_m = commutator(hm, mk);
  const PauliSum outer_k = commutator(hk, mk);

  const double num = b * normalized_trace_product(hm, outer_m).real() + normalized_trace_product(hm, outer_k).real();
  const double den = b * b * normalized_trace_product(outer_m, outer_m).real() +
                     normalized_trace_product(outer_k, outer_k).real() +
                     2.0 * b * normalized_trace_product(outer_m, outer_k).real();
  if (!(std::abs(den) > 0)) throw std::runtime_error("alpha1: vanishing denominator");
  return num / den;
}

GaugePotential build_gauge_potential(const HoneycombCluster& cluster, const ModelParams& params) {
  GaugePotential g;
  g.alpha1 = alpha1_closed_form(params);
  if (params.B == 0) {
    g.op = PauliSum(cluster.n_sites());
    return g;
  }
  const PauliSum c = commutator(build_kitaev(cluster, params.J), build_zeeman(cluster, params.B));
  g.op = c * cplx(0, g.alpha1);
  return g;
}

PauliSum gauge_potential_link_sum(const HoneycombCluster& cluster, const ModelParams& params, LinkSumForm form) {
  params.check();
  const int n = cluster.n_sites();
  if (params.B == 0) return PauliSum(n);
  const double s = params.field_scale();
  const double r = params.B / params.J;
  const double pref = r / (18.0 * s * s * r * r + 10.0);

  std::vector<PauliSum::Term> terms;
  for (const auto& l : cluster.links()) {
    char g = letter(l.type), plus = 0, minus = 0;
    switch (l.type) {
      case LinkType::x: plus = 'Y'; minus = 'Z'; break;
      case LinkType::y: plus = 'Z'; minus = 'X'; break;
      case LinkType::z:
        plus = form == LinkSumForm::cyclic ? 'X' : 'Y';
        minus = form == LinkSumForm::cyclic ? 'Y' : 'X';
        break;
    }
    terms.push_back({pref, pair(n, l.i, g, l.j, plus)});
    terms.push_back({-pref, pair(n, l.i, g, l.j, minus)});
    terms.push_back({pref, pair(n, l.j, g, l.i, plus)});
    terms.push_back({-pref, pair(n, l.j, g, l.i, minus)});
  }
  return PauliSum::from_terms(n, std::move(terms));
}

PauliSum build_cd_hamiltonian(const HoneycombCluster& cluster, const ModelParams& params, double lambda_dot) {
  PauliSum h = build_h0(cluster, params);
  if (lambda_dot == 0 || params.B == 0) return h;
  const GaugePotential a = build_gauge_potential(cluster, params);
  return linear_combination({{1.0, &h}, {lambda_dot, &a.op}});
}

double variance_S(const HoneycombCluster& cluster, const ModelParams& params, const PauliSum& A) {
  const PauliSum h0 = build_h0(cluster, params);
  const PauliSum hm = build_zeeman(cluster, params.B);
  const PauliSum c = commutator(h0, A);
  const PauliSum g = linear_combination({{1.0, &hm}, {cplx(0, -1), &c}});
  return normalized_trace_product(g, g).real();
}

DenseOperator exact_gauge_potential_spectral(const DenseOperator& H0, const DenseOperator& dH0) {
  if (H0.rows() != dH0.rows() || H0.cols() != dH0.cols()) throw std::invalid_argument("operator shapes differ");
  if (H0.rows() > (Eigen::Index{1} << kMaxDenseSites))
    throw std::invalid_argument("spectral gauge potential is limited to 2^12 states");
  const auto eig = hermitian_eigen(H0);
  const Eigen::Index d = eig.values.size();
  if (d == 0) return DenseOperator(0, 0);
  const double width = eig.values[d - 1] - eig.values[0];
  const double tol = kDegeneracyTolerance * std::max(width, 1e-300);

  std::vector<Eigen::Index> block(static_cast<std::size_t>(d));
  Eigen::Index id = 0;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (k > 0 && eig.values[k] - eig.values[k - 1] > tol) ++id;
    block[static_cast<std::size_t>(k)] = id;
  }

  DenseOperator a = eig.vectors.adjoint() * dH0 * eig.vectors;
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m) {
      if (block[static_cast<std::size_t>(m)] == block[static_cast<std::size_t>(n)])
        a(m, n) = 0;
      else
        a(m, n) *= cplx(0, 1) / (eig.values[n] - eig.values[m]);
    }
  return eig.vectors * a * eig.vectors.adjoint();
}

}  // namespace kcd
