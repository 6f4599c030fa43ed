#pragma once

#include <melonica/error.hpp>
#include <melonica/graph.hpp>
#include <melonica/guard.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace melonica {

using Complex = std::complex<double>;

// Rank-D complex tensor with every index running over 0..N-1, stored with
// the last index fastest.
struct NumericTensor {
  int rank = 0;
  int n = 0;
  std::vector<Complex> entries;

  NumericTensor() = default;
  NumericTensor(int rank_, int n_) : rank(rank_), n(n_), entries(static_cast<std::size_t>(std::pow(n_, rank_))) {}

  std::size_t offset(const std::vector<int>& idx) const {
    std::size_t off = 0;
    for (int k = 0; k < rank; ++k) off = off * n + idx[k];
    return off;
  }
  Complex& at(const std::vector<int>& idx) { return entries[offset(idx)]; }
  const Complex& at(const std::vector<int>& idx) const { return entries[offset(idx)]; }
};

inline NumericTensor random_tensor(int rank, int n, std::uint64_t seed) {
  NumericTensor t(rank, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& e : t.entries) e = Complex(normal(rng), normal(rng));
  return t;
}

/// Which color's line feeds each slot of the conjugate tensors. The identity
/// is the invariant trace; anything else breaks the color structure and
/// serves as a negative control.
using SlotMap = std::vector<Color>;

inline SlotMap identity_slots(int rank) {
  SlotMap m(rank);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

inline constexpr int kNumericMaxN = 3;
inline constexpr int kNumericMaxP = 3;

/// Contracts prod_w T[...] prod_b conj(T[...]) over one summed index per
/// line of the bubble, by nested summation over all N^{Dp} index values.
inline Complex contract(const ColoredGraph& bubble, const NumericTensor& t, const SlotMap& slots) {
  if (bubble.num_colors() != t.rank)
    throw Error(ErrorCode::RankMismatch, "bubble has " + std::to_string(bubble.num_colors()) +
                                             " colors but the tensor has rank " + std::to_string(t.rank));
  if (t.n > kNumericMaxN || bubble.p() > kNumericMaxP)
    throw Error(ErrorCode::SizeLimitExceeded, "numeric contraction is limited to N <= 3 and p <= 3");
  const int rank = t.rank;
  const int p = bubble.p();
  const int lines = rank * p;
  // Line (c, w) is variable c * p + w.
  std::vector<int> value(lines, 0);
  std::vector<int> idx(rank);
  Complex total = 0;
  while (true) {
    Complex term = 1;
    for (int w = 0; w < p; ++w) {
      for (int c = 0; c < rank; ++c) idx[c] = value[c * p + w];
      term *= t.at(idx);
    }
    for (int b = 0; b < p; ++b) {
      for (int s = 0; s < rank; ++s) {
        const Color c = slots[s];
        idx[s] = value[c * p + bubble.white_of(c, b)];
      }
      term *= std::conj(t.at(idx));
    }
    total += term;
    int k = lines - 1;
    while (k >= 0 && ++value[k] == t.n) value[k--] = 0;
    if (k < 0) break;
  }
  return total;
}

/// Tr_B(T, conj T).
inline Complex numeric_invariant_eval(const ColoredGraph& bubble, const NumericTensor& t) {
  return contract(bubble, t, identity_slots(t.rank));
}

using UnitaryMatrix = Eigen::MatrixXcd;

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal absorbed into Q.
inline UnitaryMatrix haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// T'_{a_1..a_D} = sum_n U1_{a_1 n_1} ... UD_{a_D n_D} T_{n_1..n_D}.
inline NumericTensor transform(const NumericTensor& t, const std::vector<UnitaryMatrix>& us) {
  NumericTensor cur = t;
  std::vector<int> idx(t.rank), src(t.rank);
  for (int slot = 0; slot < t.rank; ++slot) {
    NumericTensor next(t.rank, t.n);
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      Complex acc = 0;
      src = idx;
      for (int m = 0; m < t.n; ++m) {
        src[slot] = m;
        acc += us[slot](idx[slot], m) * cur.at(src);
      }
      next.at(idx) = acc;
      int k = t.rank - 1;
      while (k >= 0 && ++idx[k] == t.n) idx[k--] = 0;
      if (k < 0) break;
    }
    cur = std::move(next);
  }
  return cur;
}

/// Largest |Tr(T') - Tr(T)| over `trials` draws of independent Haar
/// unitaries, one per slot.
inline double unitary_invariance_check(const ColoredGraph& bubble, const NumericTensor& t, int trials,
                                       std::uint64_t seed, const SlotMap& slots) {
  std::mt19937_64 rng(seed);
  const Complex reference = contract(bubble, t, slots);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<UnitaryMatrix> us;
    for (int s = 0; s < t.rank; ++s) us.push_back(haar_unitary(t.n, rng));
    worst = std::max(worst, std::abs(contract(bubble, transform(t, us), slots) - reference));
  }
  return worst;
}

inline double unitary_invariance_check(const ColoredGraph& bubble, const NumericTensor& t, int trials,
                                       std::uint64_t seed) {
  return unitary_invariance_check(bubble, t, trials, seed, identity_slots(t.rank));
}

}  // namespace melonica
