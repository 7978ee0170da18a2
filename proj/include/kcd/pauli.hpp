#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kcd {

using cplx = std::complex<double>;

/// Signed Pauli string i^phase * P_0 (x) P_1 (x) ... over n sites.
///
/// Site k is encoded by bit k of two masks: X -> (x=1, z=0), Z -> (0, 1),
/// Y -> (1, 1). The letters are the Hermitian Paulis, so the operator of a
/// single site is i^(x z) X^x Z^z.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_sites);
  PauliString(int n_sites, std::uint64_t x_mask, std::uint64_t z_mask, int phase = 0);

  /// Letters given as (site, 'I'|'X'|'Y'|'Z') pairs.
  static PauliString from_letters(int n_sites, std::initializer_list<std::pair<int, char>> letters);
  /// Parses "X0 Z3 Y7"; an empty string or "I" is the identity.
  static PauliString parse(int n_sites, std::string_view text);

  int n_sites() const noexcept { return n_sites_; }
  std::uint64_t x_mask() const noexcept { return x_; }
  std::uint64_t z_mask() const noexcept { return z_; }
  /// Exponent of i in the prefactor, in [0, 4).
  int phase() const noexcept { return phase_; }
  cplx phase_factor() const noexcept;

  char letter(int site) const;
  PauliString with_letter(int site, char letter) const;
  bool is_identity() const noexcept { return x_ == 0 && z_ == 0; }
  int weight() const noexcept;

  /// Letters only, e.g. "X0 Z3"; "I" for the identity.
  std::string letters() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int n_sites_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

/// Pauli group product a * b.
PauliString multiply(const PauliString& a, const PauliString& b);
bool commutes(const PauliString& a, const PauliString& b);

/// Linear combination of Pauli strings in canonical form: strings are unique,
/// sorted by (x_mask, z_mask), carry phase 0, and coefficients smaller than
/// kDropTolerance times the largest contributing coefficient are removed.
class PauliSum {
 public:
  struct Term {
    cplx coeff;
    PauliString string;
  };

  static constexpr double kDropTolerance = 1e-12;

  PauliSum() = default;
  explicit PauliSum(int n_sites) : n_sites_(n_sites) {}

  /// Canonicalizes arbitrary terms (phases folded, duplicates merged).
  static PauliSum from_terms(int n_sites, std::vector<Term> terms);
  static PauliSum identity(int n_sites, cplx coeff = 1.0);
  static PauliSum single(const PauliString& s, cplx coeff = 1.0);

  int n_sites() const noexcept { return n_sites_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Coefficient of a string (its phase is folded in); 0 if absent.
  cplx coefficient(const PauliString& s) const;

  /// Sum of |coeff|: an upper bound on the operator norm.
  double norm_bound() const noexcept;
  double max_abs_coeff() const noexcept;

  PauliSum adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(cplx s);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }

  /// Debug text, one term per line: "re im X0 Z3".
  std::string to_text() const;
  static PauliSum from_text(int n_sites, std::string_view text);

 private:
  static PauliSum canonical(int n_sites, std::vector<Term> terms, double scale);

  int n_sites_ = 0;
  std::vector<Term> terms_;
};

/// sum_k w_k A_k, canonicalized once.
PauliSum linear_combination(std::initializer_list<std::pair<cplx, const PauliSum*>> parts);

PauliSum multiply(const PauliSum& a, const PauliSum& b);
/// AB - BA; only anticommuting string pairs contribute.
PauliSum commutator(const PauliSum& a, const PauliSum& b);
/// Tr(A) / 2^N, i.e. the identity coefficient.
cplx normalized_trace(const PauliSum& a);
/// Tr(AB) / 2^N without forming the product.
cplx normalized_trace_product(const PauliSum& a, const PauliSum& b);

}  // namespace kcd
