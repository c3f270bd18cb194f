#pragma once

// Problem instances, partition tables and the minimum dot product.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "indep_bounds/errors.hpp"

namespace indep_bounds {

/// One instance (n, k_{-1}, k_0, k_1, t): vectors in {-1,0,1}^n with k_a
/// coordinates equal to a, and forbidden dot product t.
struct FiniteParams {
  int n = 0;
  int k_m1 = 0;
  int k_0 = 0;
  int k_1 = 0;
  int t = 0;

  /// k_alpha for alpha in {-1, 0, 1}.
  int k(int alpha) const { return alpha < 0 ? k_m1 : (alpha == 0 ? k_0 : k_1); }
  int nonzero() const { return k_m1 + k_1; }

  friend bool operator==(const FiniteParams&, const FiniteParams&) = default;
};

inline std::string to_string(const FiniteParams& p) {
  std::ostringstream os;
  os << "(" << p.n << ";" << p.k_m1 << "," << p.k_0 << "," << p.k_1 << ";t=" << p.t << ")";
  return os.str();
}

/// Fractional profile k'_alpha = k_alpha / n and t' = t / n.
struct AsymptoticParams {
  double kp_m1 = 0.0;
  double kp_0 = 0.0;
  double kp_1 = 0.0;
  double tp = 0.0;

  double k(int alpha) const { return alpha < 0 ? kp_m1 : (alpha == 0 ? kp_0 : kp_1); }
  double nonzero() const { return kp_m1 + kp_1; }
};

inline FiniteParams validate_finite(const FiniteParams& p) {
  if (p.n < 0 || p.k_m1 < 0 || p.k_0 < 0 || p.k_1 < 0)
    throw BoundsError(ErrorCode::InvalidProfile, "negative count in " + to_string(p));
  if (p.k_m1 + p.k_0 + p.k_1 != p.n)
    throw BoundsError(ErrorCode::InvalidProfile,
                      "k_m1 + k_0 + k_1 != n in " + to_string(p));
  return p;
}

inline AsymptoticParams validate_asymptotic(const AsymptoticParams& kp) {
  if (kp.kp_m1 < 0.0 || kp.kp_0 < 0.0 || kp.kp_1 < 0.0)
    throw BoundsError(ErrorCode::InvalidProfile, "negative fractional count");
  if (std::abs(kp.kp_m1 + kp.kp_0 + kp.kp_1 - 1.0) > 1e-12)
    throw BoundsError(ErrorCode::InvalidProfile, "fractional profile does not sum to 1");
  return kp;
}

/// Negating every coordinate maps G_n(k_{-1},k_0,k_1,t) isomorphically onto
/// G_n(k_1,k_0,k_{-1},t); the canonical form has k_{-1} <= k_1.
struct CanonicalForm {
  FiniteParams params;
  bool negated = false;
};

inline CanonicalForm canonical_form(const FiniteParams& p) {
  if (p.k_m1 <= p.k_1) return {p, false};
  FiniteParams q = p;
  std::swap(q.k_m1, q.k_1);
  return {q, true};
}

inline AsymptoticParams canonical_form(const AsymptoticParams& kp) {
  if (kp.kp_m1 <= kp.kp_1) return kp;
  AsymptoticParams q = kp;
  std::swap(q.kp_m1, q.kp_1);
  return q;
}

/// Minimum dot product of two vectors with a_m1 minus-ones, a_0 zeros and
/// a_1 ones. Works for integer and fractional (per-unit-n) profiles.
template <class T>
T mdp(T k_m1, T k_0, T k_1) {
  const T lo = std::min(k_m1, k_1);
  const T hi = std::max(k_m1, k_1);
  if (k_0 >= hi - lo) return T(-2) * lo;
  return hi - T(3) * lo - k_0;
}

/// Block partition {1..n} = M_{-1} + M_0 + M_1 with |M_beta| = m_beta, and
/// m_{alpha,beta} coordinates of value alpha inside block beta. The integer
/// and fractional variants share this template.
template <class T>
struct BasicPartitionTable {
  std::array<T, 3> m{};                  // m_beta, indexed beta + 1
  std::array<std::array<T, 3>, 3> c{};   // c[alpha + 1][beta + 1] = m_{alpha,beta}

  T& block(int beta) { return m[static_cast<std::size_t>(beta + 1)]; }
  const T& block(int beta) const { return m[static_cast<std::size_t>(beta + 1)]; }
  T& cell(int alpha, int beta) {
    return c[static_cast<std::size_t>(alpha + 1)][static_cast<std::size_t>(beta + 1)];
  }
  const T& cell(int alpha, int beta) const {
    return c[static_cast<std::size_t>(alpha + 1)][static_cast<std::size_t>(beta + 1)];
  }

  T row_sum(int alpha) const { return cell(alpha, -1) + cell(alpha, 0) + cell(alpha, 1); }
  T column_sum(int beta) const { return cell(-1, beta) + cell(0, beta) + cell(1, beta); }

  /// Recompute m_beta from the cells.
  void sync_blocks() {
    for (int beta = -1; beta <= 1; ++beta) block(beta) = column_sum(beta);
  }

  /// Build a table from the 9 cells (row alpha, column beta); m is derived.
  static BasicPartitionTable from_cells(const std::array<std::array<T, 3>, 3>& cells) {
    BasicPartitionTable t;
    t.c = cells;
    t.sync_blocks();
    return t;
  }

  /// Negation symmetry: both the vectors and the block labels flip sign.
  BasicPartitionTable negated() const {
    BasicPartitionTable t;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b) t.cell(a, b) = cell(-a, -b);
    for (int b = -1; b <= 1; ++b) t.block(b) = block(-b);
    return t;
  }

  friend bool operator==(const BasicPartitionTable&, const BasicPartitionTable&) = default;
};

using PartitionTable = BasicPartitionTable<int>;
using FractionalTable = BasicPartitionTable<double>;

template <class T>
std::string to_string(const BasicPartitionTable<T>& tab) {
  std::ostringstream os;
  os << "{m=[" << tab.block(-1) << "," << tab.block(0) << "," << tab.block(1) << "],cols=";
  for (int b = -1; b <= 1; ++b) {
    os << "(" << tab.cell(-1, b) << "," << tab.cell(0, b) << "," << tab.cell(1, b) << ")";
  }
  os << "}";
  return os.str();
}

/// Single-block table: everything sits in block beta.
inline PartitionTable single_block_table(const FiniteParams& p, int beta = 1) {
  PartitionTable t;
  for (int a = -1; a <= 1; ++a) t.cell(a, beta) = p.k(a);
  t.sync_blocks();
  return t;
}

/// Table whose block beta has composition cols[beta + 1] = (m_{-1,b}, m_{0,b}, m_{1,b}).
inline PartitionTable table_from_columns(const std::array<std::array<int, 3>, 3>& cols) {
  PartitionTable t;
  for (int b = -1; b <= 1; ++b)
    for (int a = -1; a <= 1; ++a)
      t.cell(a, b) = cols[static_cast<std::size_t>(b + 1)][static_cast<std::size_t>(a + 1)];
  t.sync_blocks();
  return t;
}

inline PartitionTable validate_table(const PartitionTable& tab, const FiniteParams& p) {
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      if (tab.cell(a, b) < 0)
        throw BoundsError(ErrorCode::InvalidTable, "negative cell m_{" + std::to_string(a) +
                                                       "," + std::to_string(b) + "}");
  for (int a = -1; a <= 1; ++a)
    if (tab.row_sum(a) != p.k(a))
      throw BoundsError(ErrorCode::InvalidTable,
                        "row sum for alpha=" + std::to_string(a) + " is " +
                            std::to_string(tab.row_sum(a)) + ", expected k=" +
                            std::to_string(p.k(a)));
  for (int b = -1; b <= 1; ++b)
    if (tab.column_sum(b) != tab.block(b))
      throw BoundsError(ErrorCode::InvalidTable,
                        "column sum for beta=" + std::to_string(b) + " is " +
                            std::to_string(tab.column_sum(b)) + ", expected m=" +
                            std::to_string(tab.block(b)));
  if (tab.block(-1) + tab.block(0) + tab.block(1) != p.n)
    throw BoundsError(ErrorCode::InvalidTable, "block sizes do not sum to n");
  return tab;
}

/// Sum over blocks of the per-block minimum dot product; empty blocks add 0.
template <class T>
T table_mdp_sum(const BasicPartitionTable<T>& tab) {
  T s{};
  for (int b = -1; b <= 1; ++b) {
    if (tab.column_sum(b) == T{}) continue;
    s += mdp(tab.cell(-1, b), tab.cell(0, b), tab.cell(1, b));
  }
  return s;
}

/// Parameters of the glued constructions: table, inner threshold t1 and the
/// thinning threshold s (used by the thinned variant only).
struct GlueConfig {
  PartitionTable table;
  int t1 = 0;
  int s = 0;
};

}  // namespace indep_bounds
