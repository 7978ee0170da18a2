#include "kcd/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace kcd {

namespace {

constexpr cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int popcount(std::uint64_t v) { return std::popcount(v); }

std::uint64_t site_mask(int n_sites) {
  return n_sites >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_sites) - 1;
}

void check_same_size(int a, int b) {
  if (a != b)
    throw std::invalid_argument("Pauli operands act on different site counts (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
}

bool key_less(const PauliSum::Term& a, const PauliSum::Term& b) {
  if (a.string.x_mask() != b.string.x_mask()) return a.string.x_mask() < b.string.x_mask();
  return a.string.z_mask() < b.string.z_mask();
}

bool same_key(const PauliString& a, const PauliString& b) {
  return a.x_mask() == b.x_mask() && a.z_mask() == b.z_mask();
}

}  // namespace

PauliString::PauliString(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 0 || n_sites > 64) throw std::invalid_argument("Pauli strings support 0..64 sites");
}

PauliString::PauliString(int n_sites, std::uint64_t x_mask, std::uint64_t z_mask, int phase)
    : PauliString(n_sites) {
  if ((x_mask | z_mask) & ~site_mask(n_sites)) throw std::invalid_argument("Pauli mask exceeds site count");
  x_ = x_mask;
  z_ = z_mask;
  phase_ = ((phase % 4) + 4) % 4;
}

PauliString PauliString::from_letters(int n_sites, std::initializer_list<std::pair<int, char>> letters) {
  PauliString s(n_sites);
  for (auto [site, l] : letters) s = s.with_letter(site, l);
  return s;
}

PauliString PauliString::parse(int n_sites, std::string_view text) {
  PauliString s(n_sites);
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    auto tok = text.substr(pos, end - pos);
    pos = end;
    if (tok == "I") continue;
    int site = -1;
    auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), site);
    if (tok.size() < 2 || ec != std::errc() || ptr != tok.data() + tok.size())
      throw std::invalid_argument("bad Pauli token '" + std::string(tok) + "'");
    if (s.letter(site) != 'I') throw std::invalid_argument("site repeated in Pauli string");
    s = s.with_letter(site, tok[0]);
  }
  return s;
}

cplx PauliString::phase_factor() const noexcept { return kPhases[phase_]; }

char PauliString::letter(int site) const {
  if (site < 0 || site >= n_sites_) throw std::out_of_range("Pauli site out of range");
  const bool x = (x_ >> site) & 1;
  const bool z = (z_ >> site) & 1;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

PauliString PauliString::with_letter(int site, char l) const {
  if (site < 0 || site >= n_sites_) throw std::out_of_range("Pauli site out of range");
  PauliString s = *this;
  const std::uint64_t bit = std::uint64_t{1} << site;
  s.x_ &= ~bit;
  s.z_ &= ~bit;
  switch (l) {
    case 'I': break;
    case 'X': case 'x': s.x_ |= bit; break;
    case 'Y': case 'y': s.x_ |= bit; s.z_ |= bit; break;
    case 'Z': case 'z': s.z_ |= bit; break;
    default: throw std::invalid_argument(std::string("unknown Pauli letter '") + l + "'");
  }
  return s;
}

int PauliString::weight() const noexcept { return popcount(x_ | z_); }

std::string PauliString::letters() const {
  std::string out;
  for (int k = 0; k < n_sites_; ++k) {
    char l = letter(k);
    if (l == 'I') continue;
    if (!out.empty()) out += ' ';
    out += l;
    out += std::to_string(k);
  }
  return out.empty() ? "I" : out;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  check_same_size(a.n_sites(), b.n_sites());
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  // (i^{x1 z1} X^x1 Z^z1)(i^{x2 z2} X^x2 Z^z2) = i^{x1 z1 + x2 z2 + 2 z1 x2} X^x Z^z
  int e = a.phase() + b.phase() + popcount(a.x_mask() & a.z_mask()) + popcount(b.x_mask() & b.z_mask()) +
          2 * popcount(a.z_mask() & b.x_mask()) - popcount(x & z);
  return PauliString(a.n_sites(), x, z, e);
}

bool commutes(const PauliString& a, const PauliString& b) {
  check_same_size(a.n_sites(), b.n_sites());
  return ((popcount(a.x_mask() & b.z_mask()) + popcount(a.z_mask() & b.x_mask())) & 1) == 0;
}

PauliSum PauliSum::canonical(int n_sites, std::vector<Term> terms, double scale) {
  for (auto& t : terms) {
    if (t.string.n_sites() != n_sites) check_same_size(n_sites, t.string.n_sites());
    if (t.string.phase() != 0) {
      t.coeff *= t.string.phase_factor();
      t.string = PauliString(n_sites, t.string.x_mask(), t.string.z_mask());
    }
  }
  std::sort(terms.begin(), terms.end(), key_less);
  PauliSum out(n_sites);
  const double cut = kDropTolerance * scale;
  for (std::size_t k = 0; k < terms.size();) {
    cplx c = terms[k].coeff;
    std::size_t j = k + 1;
    while (j < terms.size() && same_key(terms[j].string, terms[k].string)) c += terms[j++].coeff;
    if (std::abs(c) > cut) out.terms_.push_back({c, terms[k].string});
    k = j;
  }
  return out;
}

PauliSum PauliSum::from_terms(int n_sites, std::vector<Term> terms) {
  double scale = 0;
  for (const auto& t : terms) scale = std::max(scale, std::abs(t.coeff));
  return canonical(n_sites, std::move(terms), scale);
}

PauliSum PauliSum::identity(int n_sites, cplx coeff) {
  return from_terms(n_sites, {{coeff, PauliString(n_sites)}});
}

PauliSum PauliSum::single(const PauliString& s, cplx coeff) { return from_terms(s.n_sites(), {{coeff, s}}); }

cplx PauliSum::coefficient(const PauliString& s) const {
  check_same_size(n_sites_, s.n_sites());
  Term probe{0, s};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, key_less);
  if (it == terms_.end() || !same_key(it->string, s)) return 0;
  // s = i^p P, so P = i^-p s and the coefficient of s is c i^-p.
  return it->coeff * std::conj(s.phase_factor());
}

double PauliSum::norm_bound() const noexcept {
  double s = 0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

double PauliSum::max_abs_coeff() const noexcept {
  double m = 0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.coeff = std::conj(t.coeff);
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  const double cut = tol * std::max(1.0, max_abs_coeff());
  return std::all_of(terms_.begin(), terms_.end(), [cut](const Term& t) { return std::abs(t.coeff.imag()) <= cut; });
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  return *this = linear_combination({{1.0, this}, {1.0, &other}});
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  return *this = linear_combination({{1.0, this}, {-1.0, &other}});
}

PauliSum& PauliSum::operator*=(cplx s) {
  if (s == cplx(0)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

std::string PauliSum::to_text() const {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& t : terms_)
    out << t.coeff.real() << ' ' << t.coeff.imag() << ' ' << t.string.letters() << '\n';
  return out.str();
}

PauliSum PauliSum::from_text(int n_sites, std::string_view text) {
  std::vector<Term> terms;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double re = 0, im = 0;
    if (!(ls >> re >> im))
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 're im string'");
    std::string rest;
    std::getline(ls, rest);
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.pop_back();
    terms.push_back({{re, im}, PauliString::parse(n_sites, rest)});
  }
  return from_terms(n_sites, std::move(terms));
}

PauliSum linear_combination(std::initializer_list<std::pair<cplx, const PauliSum*>> parts) {
  if (parts.size() == 0) throw std::invalid_argument("empty linear combination");
  const int n = parts.begin()->second->n_sites();
  std::vector<PauliSum::Term> terms;
  for (auto [w, sum] : parts) {
    check_same_size(n, sum->n_sites());
    if (w == cplx(0)) continue;
    for (const auto& t : sum->terms()) terms.push_back({w * t.coeff, t.string});
  }
  return PauliSum::from_terms(n, std::move(terms));
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  check_same_size(a.n_sites(), b.n_sites());
  std::vector<PauliSum::Term> terms;
  terms.reserve(a.size() * b.size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) terms.push_back({ta.coeff * tb.coeff, multiply(ta.string, tb.string)});
  return PauliSum::from_terms(a.n_sites(), std::move(terms));
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  check_same_size(a.n_sites(), b.n_sites());
  std::vector<PauliSum::Term> terms;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms())
      if (!commutes(ta.string, tb.string))
        terms.push_back({2.0 * ta.coeff * tb.coeff, multiply(ta.string, tb.string)});
  return PauliSum::from_terms(a.n_sites(), std::move(terms));
}

cplx normalized_trace(const PauliSum& a) { return a.coefficient(PauliString(a.n_sites())); }

cplx normalized_trace_product(const PauliSum& a, const PauliSum& b) {
  check_same_size(a.n_sites(), b.n_sites());
  cplx s = 0;
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    if (key_less(*ia, *ib)) {
      ++ia;
    } else if (key_less(*ib, *ia)) {
      ++ib;
    } else {
      s += ia->coeff * ib->coeff;
      ++ia;
      ++ib;
    }
  }
  return s;
}

}  // namespace kcd
