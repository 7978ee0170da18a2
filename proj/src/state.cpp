#include "kcd/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#if defined(__BMI2__)
#include <immintrin.h>
#endif

namespace kcd {

namespace {

constexpr int kMaxBlockBits = 8;
constexpr int kChunkBits = 12;

inline std::uint64_t extract_bits(std::uint64_t v, std::uint64_t mask) {
#if defined(__BMI2__)
  return _pext_u64(v, mask);
#else
  std::uint64_t out = 0;
  int k = 0;
  while (mask) {
    const std::uint64_t low = mask & (~mask + 1);
    if (v & low) out |= std::uint64_t{1} << k;
    ++k;
    mask &= mask - 1;
  }
  return out;
#endif
}

inline std::uint64_t deposit_bits(std::uint64_t v, std::uint64_t mask) {
  std::uint64_t out = 0;
  int k = 0;
  while (mask) {
    const std::uint64_t low = mask & (~mask + 1);
    if ((v >> k) & 1) out |= low;
    ++k;
    mask &= mask - 1;
  }
  return out;
}

// Coefficient of the basis action P|i> = c (-1)^{|i & z|} |i ^ x>.
cplx action_coefficient(const PauliSum::Term& t) {
  static constexpr cplx kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int ny = std::popcount(t.string.x_mask() & t.string.z_mask());
  return t.coeff * kI[(ny + t.string.phase()) % 4];
}

void check_state_sites(int n) {
  if (n < 0 || n > kMaxStateSites)
    throw std::invalid_argument("state vectors support at most " + std::to_string(kMaxStateSites) + " sites");
}

}  // namespace

Eigen::Index hilbert_dimension(int n_sites) {
  check_state_sites(n_sites);
  return Eigen::Index{1} << n_sites;
}

StateVector StateVector::from_amplitudes(int n_sites, Amplitudes a) {
  if (a.size() != hilbert_dimension(n_sites)) throw std::invalid_argument("amplitude vector has wrong dimension");
  const double n2 = a.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTolerance)
    throw std::invalid_argument("state is not normalized (|psi|^2 = " + std::to_string(n2) + ")");
  return StateVector(n_sites, std::move(a));
}

StateVector StateVector::normalized(int n_sites, Amplitudes a) {
  if (a.size() != hilbert_dimension(n_sites)) throw std::invalid_argument("amplitude vector has wrong dimension");
  const double n = a.norm();
  if (!(n > 0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  a /= n;
  return StateVector(n_sites, std::move(a));
}

StateVector StateVector::basis(int n_sites, std::uint64_t index) {
  const auto dim = hilbert_dimension(n_sites);
  if (index >= static_cast<std::uint64_t>(dim)) throw std::out_of_range("basis index out of range");
  Amplitudes a = Amplitudes::Zero(dim);
  a[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(n_sites, std::move(a));
}

CompiledOperator::CompiledOperator(const PauliSum& op) : n_sites_(op.n_sites()) {
  check_state_sites(n_sites_);
  chunk_bits_ = std::min(n_sites_, kChunkBits);
  norm_bound_ = op.norm_bound();

  std::map<std::uint64_t, std::vector<const PauliSum::Term*>> by_x;
  for (const auto& t : op.terms()) by_x[t.string.x_mask()].push_back(&t);

  for (auto& [x, terms] : by_x) {
    // Greedy packing of terms into blocks whose joint Z support stays small.
    std::vector<std::vector<const PauliSum::Term*>> packs;
    std::vector<std::uint64_t> masks;
    for (const auto* t : terms) {
      const std::uint64_t z = t->string.z_mask();
      int best = -1;
      int best_bits = kMaxBlockBits + 1;
      for (std::size_t b = 0; b < masks.size(); ++b) {
        const int bits = std::popcount(masks[b] | z);
        if (bits <= kMaxBlockBits && bits < best_bits) {
          best = static_cast<int>(b);
          best_bits = bits;
        }
      }
      if (best < 0) {
        if (std::popcount(z) > kMaxBlockBits) {
          // Wide strings get a block of their own with an exact sign rule.
          packs.push_back({t});
          masks.push_back(z);
          continue;
        }
        packs.emplace_back();
        masks.push_back(0);
        best = static_cast<int>(packs.size()) - 1;
      }
      packs[best].push_back(t);
      masks[best] |= z;
    }

    Group g;
    g.x = x;
    for (std::size_t b = 0; b < packs.size(); ++b) {
      Block blk;
      const int bits = std::popcount(masks[b]);
      if (bits > kMaxBlockBits) {
        // Table of two entries indexed by the parity of i & z.
        blk.mask = masks[b];
        const cplx c = action_coefficient(*packs[b].front());
        blk.table = {c, -c};
      } else {
        blk.mask = masks[b];
        blk.table.assign(std::size_t{1} << bits, 0.0);
        for (std::uint64_t u = 0; u < blk.table.size(); ++u) {
          const std::uint64_t bits_set = deposit_bits(u, blk.mask);
          cplx s = 0;
          for (const auto* t : packs[b]) {
            const cplx c = action_coefficient(*t);
            s += (std::popcount(bits_set & t->string.z_mask()) & 1) ? -c : c;
          }
          blk.table[u] = s;
        }
      }
      g.blocks.push_back(std::move(blk));
    }
    groups_.push_back(std::move(g));
  }
}

void CompiledOperator::apply_chunk(const cplx* in, cplx* out, std::uint64_t base, std::uint64_t len) const {
  std::fill(out + base, out + base + len, cplx(0));
  for (const auto& g : groups_) {
    const std::uint64_t x = g.x;
    if (g.blocks.size() == 1) {
      const auto& b = g.blocks.front();
      const cplx* table = b.table.data();
      const std::uint64_t mask = b.mask;
      if (b.table.size() == 2 && std::popcount(mask) > kMaxBlockBits) {
        for (std::uint64_t j = base; j < base + len; ++j) {
          const std::uint64_t i = j ^ x;
          out[j] += table[std::popcount(i & mask) & 1] * in[i];
        }
      } else {
        for (std::uint64_t j = base; j < base + len; ++j) {
          const std::uint64_t i = j ^ x;
          out[j] += table[extract_bits(i, mask)] * in[i];
        }
      }
      continue;
    }
    for (std::uint64_t j = base; j < base + len; ++j) {
      const std::uint64_t i = j ^ x;
      cplx c = 0;
      for (const auto& b : g.blocks) {
        if (b.table.size() == 2 && std::popcount(b.mask) > kMaxBlockBits)
          c += b.table[std::popcount(i & b.mask) & 1];
        else
          c += b.table[extract_bits(i, b.mask)];
      }
      out[j] += c * in[i];
    }
  }
}

void CompiledOperator::apply(const cplx* in, cplx* out) const {
  const std::uint64_t len = std::uint64_t{1} << chunk_bits_;
  const std::int64_t chunks = std::int64_t{1} << (n_sites_ - chunk_bits_);
#pragma omp parallel for schedule(static) if (chunks > 1)
  for (std::int64_t c = 0; c < chunks; ++c) apply_chunk(in, out, static_cast<std::uint64_t>(c) * len, len);
}

Amplitudes CompiledOperator::apply(const Amplitudes& in) const {
  if (in.size() != dimension()) throw std::invalid_argument("operator/vector dimension mismatch");
  Amplitudes out(in.size());
  apply(in.data(), out.data());
  return out;
}

cplx CompiledOperator::expectation(const Amplitudes& v) const {
  if (v.size() != dimension()) throw std::invalid_argument("operator/vector dimension mismatch");
  const std::uint64_t len = std::uint64_t{1} << chunk_bits_;
  const std::int64_t chunks = std::int64_t{1} << (n_sites_ - chunk_bits_);
  std::vector<cplx> partial(static_cast<std::size_t>(chunks));
  const cplx* in = v.data();
#pragma omp parallel if (chunks > 1)
  {
    Amplitudes local(static_cast<Eigen::Index>(len));
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const std::uint64_t base = static_cast<std::uint64_t>(c) * len;
      // apply_chunk writes out[base..base+len); shift the pointer so the
      // chunk lands in the local buffer.
      apply_chunk(in, local.data() - base, base, len);
      cplx s = 0;
      for (std::uint64_t k = 0; k < len; ++k) s += std::conj(in[base + k]) * local[static_cast<Eigen::Index>(k)];
      partial[static_cast<std::size_t>(c)] = s;
    }
  }
  cplx total = 0;
  for (const auto& p : partial) total += p;
  return total;
}

Amplitudes apply(const PauliSum& a, const Amplitudes& v) { return CompiledOperator(a).apply(v); }

cplx expectation(const PauliSum& a, const Amplitudes& v) { return CompiledOperator(a).expectation(v); }

DenseOperator to_dense(const PauliSum& a) {
  if (a.n_sites() > kMaxDenseSites)
    throw std::invalid_argument("to_dense: " + std::to_string(a.n_sites()) + " sites exceeds the dense limit of " +
                                std::to_string(kMaxDenseSites));
  const Eigen::Index dim = Eigen::Index{1} << a.n_sites();
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (const auto& t : a.terms()) {
    const cplx c = action_coefficient(t);
    const std::uint64_t x = t.string.x_mask();
    const std::uint64_t z = t.string.z_mask();
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(dim); ++i) {
      const cplx v = (std::popcount(i & z) & 1) ? -c : c;
      m(static_cast<Eigen::Index>(i ^ x), static_cast<Eigen::Index>(i)) += v;
    }
  }
  return m;
}

}  // namespace kcd
