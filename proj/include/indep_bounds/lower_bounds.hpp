#pragma once

// Exact finite-n lower bounds: the Ahlswede-Khachatrian product (T4), the
// Varshamov-Gilbert count (T5), glue (T6), thinned glue (T7) and pairs (T8).

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indep_bounds/bound_result.hpp"
#include "indep_bounds/combinatorics.hpp"
#include "indep_bounds/parameters.hpp"

namespace indep_bounds {

inline BigCount vertex_count(const FiniteParams& p) {
  validate_finite(p);
  return multinomial({p.k_m1, p.k_0, p.k_1});
}

/// For a fixed x of composition p, the number of y (y = x included) with
/// each dot product value. Index i holds dot = i - (k_{-1} + k_1).
///
/// l11, lmm, lm1, l1m count coordinates where (x, y) = (1,1), (-1,-1),
/// (-1,1), (1,-1); the remaining ones and minus-ones of y fall on zeros of x.
template <class Count>
std::vector<Count> dot_histogram(const FiniteParams& p, const Binomials<Count>& C) {
  validate_finite(p);
  const int k1 = p.k_1, km = p.k_m1, k0 = p.k_0;
  const int offset = k1 + km;
  std::vector<Count> hist(static_cast<std::size_t>(2 * offset + 1), Count(0));
  for (int l11 = 0; l11 <= k1; ++l11) {
    const Count a = C(k1, l11);
    for (int lmm = 0; lmm <= km; ++lmm) {
      const Count b = a * C(km, lmm);
      const int cap = std::min(km - lmm, k1 - l11);
      for (int lm1 = 0; lm1 <= cap; ++lm1) {
        const int ones_on_zeros = k1 - l11 - lm1;
        const Count z1 = C(k0, ones_on_zeros);
        if (z1 == Count(0)) continue;
        const Count c = b * C(km - lmm, lm1) * z1;
        const int free_zeros = k0 - ones_on_zeros;
        for (int l1m = 0; l1m <= cap; ++l1m) {
          const Count z2 = C(free_zeros, km - lmm - l1m);
          if (z2 == Count(0)) continue;
          const int dot = l11 - lm1 + lmm - l1m;
          hist[static_cast<std::size_t>(dot + offset)] += c * C(k1 - l11, l1m) * z2;
        }
      }
    }
  }
  return hist;
}

/// Suffix sums of a dot histogram: entry i counts y with dot >= i - offset.
template <class Count>
std::vector<Count> at_least_counts(const std::vector<Count>& hist) {
  std::vector<Count> out(hist.size() + 1, Count(0));
  for (std::size_t i = hist.size(); i-- > 0;) out[i] = out[i + 1] + hist[i];
  return out;
}

/// d(n, k_{-1}, k_0, k_1, t): number of y with (x, y) >= t for a fixed x.
template <class Count = BigCount>
Count vg_dominated_count(const FiniteParams& p) {
  validate_finite(p);
  const int offset = p.k_1 + p.k_m1;
  if (p.t > offset) return Count(0);
  Binomials<Count> C(p.n);
  const auto hist = dot_histogram(p, C);
  Count d(0);
  for (int dot = std::max(p.t, -offset); dot <= offset; ++dot)
    d += hist[static_cast<std::size_t>(dot + offset)];
  return d;
}

/// ceil(a / b) for positive b.
inline BigCount ceil_div(const BigCount& a, const BigCount& b) { return (a + b - 1) / b; }

/// Size of a greedy family with all pairwise dots < t: ceil(|V| / d), or
/// |V| itself when no y reaches t.
inline BigCount vg_family_size(const FiniteParams& p) {
  const BigCount d = vg_dominated_count(p);
  const BigCount v = vertex_count(p);
  return d == 0 ? v : ceil_div(v, d);
}

inline BoundResult vg_lower_bound(const FiniteParams& p) {
  const BigCount d = vg_dominated_count(p);
  const BigCount v = vertex_count(p);
  if (d == 0) {
    BoundResult r = BoundResult::met(TheoremId::T5, v);
    r.notes.push_back("DegenerateD: d = 0, no pair reaches t, so m = |V|");
    return r;
  }
  return BoundResult::met(TheoremId::T5, ceil_div(v, d));
}

/// prod_beta C(m_beta, m_{-1,beta}) C(m_{0,beta} + m_{1,beta}, m_{0,beta}).
template <class Count = BigCount, class Binom>
Count ak_product(const PartitionTable& tab, const Binom& C) {
  Count r(1);
  for (int b = -1; b <= 1; ++b) {
    r *= Count(C(tab.block(b), tab.cell(-1, b)));
    r *= Count(C(tab.cell(0, b) + tab.cell(1, b), tab.cell(0, b)));
  }
  return r;
}

inline BigCount ak_product(const PartitionTable& tab) {
  return ak_product<BigCount>(tab, [](std::int64_t n, std::int64_t k) { return binom(n, k); });
}

inline BoundResult ak_lower_bound(const FiniteParams& p, const PartitionTable& tab) {
  validate_finite(p);
  validate_table(tab, p);
  const int s = table_mdp_sum(tab);
  if (s <= p.t) {
    auto r = BoundResult::unmet(TheoremId::T4, ErrorCode::ConstraintUnmet,
                                "block mdp sum " + std::to_string(s) + " <= t");
    r.witness.table = tab;
    return r;
  }
  auto r = BoundResult::met(TheoremId::T4, ak_product(tab));
  r.witness.table = tab;
  return r;
}

/// min(E1, E2, E3), in the argument order of the glue inequality.
template <class T>
T extras(T m0m1, T m01, T m1m1, T m11, T mm1m1, T mm11, T block_m1, T block_1) {
  const T e1 = T(2) * std::min(block_m1, block_1);
  const T common = std::min(mm11, mm1m1) + std::min(m11, m1m1);
  const T e2 = common + std::min(block_m1, block_1);
  const T e3 = common + std::min(m11 + mm1m1, mm11 + m1m1) + m01 + m0m1;
  return std::min({e1, e2, e3});
}

template <class T>
T extras(const BasicPartitionTable<T>& tab) {
  return extras(tab.cell(0, -1), tab.cell(0, 1), tab.cell(1, -1), tab.cell(1, 1),
                tab.cell(-1, -1), tab.cell(-1, 1), tab.block(-1), tab.block(1));
}

/// Slack consumed by cross-family pairs: 2 extras + 2 (m_{1,0} + m_{-1,0}).
template <class T>
T glue_cross_slack(const BasicPartitionTable<T>& tab) {
  return T(2) * extras(tab) + T(2) * (tab.cell(1, 0) + tab.cell(-1, 0));
}

/// Profile (m_{-1}, m_0, m_1) of the outer family at threshold `threshold`.
inline FiniteParams block_profile(const FiniteParams& p, const PartitionTable& tab,
                                  int threshold) {
  return FiniteParams{p.n, tab.block(-1), tab.block(0), tab.block(1), threshold};
}

/// Glue bound. `h_override` replaces the greedy family size for the outer
/// family (e.g. an exact value from the oracle); it must be achievable.
inline BoundResult glue_lower_bound(const FiniteParams& p, const GlueConfig& cfg,
                                    std::optional<BigCount> h_override = std::nullopt) {
  validate_finite(p);
  const auto& tab = cfg.table;
  validate_table(tab, p);
  auto fail = [&](std::string why) {
    auto r = BoundResult::unmet(TheoremId::T6, ErrorCode::ConstraintUnmet, std::move(why));
    r.witness.table = tab;
    r.witness.t1 = cfg.t1;
    return r;
  };
  if (cfg.t1 > p.t) return fail("t1 > t");
  if (table_mdp_sum(tab) <= p.t) return fail("block mdp sum <= t");
  if (cfg.t1 + glue_cross_slack(tab) > p.t)
    return fail("t1 + 2 extras + 2(m_{1,0} + m_{-1,0}) > t");
  const BigCount h = h_override ? *h_override : vg_family_size(block_profile(p, tab, cfg.t1));
  auto r = BoundResult::met(TheoremId::T6, h * ak_product(tab));
  r.witness.table = tab;
  r.witness.t1 = cfg.t1;
  r.witness.h = h;
  return r;
}

/// Per-l terms of the thinning sum, l = 0..m_{-1} + m_1:
/// sum_j C(l, j) C(M - l, K - j) sum_i C(j, i) C(K - j, K1 - i), j >= j0.
/// The inner sum over i is C(K, K1) (Vandermonde).
template <class Count = BigCount>
std::vector<Count> superglue_R_terms(const FiniteParams& p, const PartitionTable& tab,
                                     const Binomials<Count>& C) {
  const int M = tab.block(-1) + tab.block(1);
  const int K = tab.cell(1, 1) + tab.cell(1, -1) + tab.cell(-1, -1) + tab.cell(-1, 1);
  const int K1 = tab.cell(1, 1) + tab.cell(1, -1);
  const int j0 = p.t - 2 * (tab.cell(1, 0) + tab.cell(-1, 0));
  std::vector<Count> terms(static_cast<std::size_t>(M + 1), Count(0));
  for (int l = 0; l <= M; ++l) {
    Count sum(0);
    for (int j = std::max(j0, 0); j <= l; ++j) sum += C(l, j) * C(M - l, K - j);
    terms[static_cast<std::size_t>(l)] = sum * C(K, K1);
  }
  return terms;
}

/// l-interval [max(0, M - m_0), min(s + 4 min(m_{-1}, m_1), M)] of the R maximum.
inline std::pair<int, int> superglue_l_range(const PartitionTable& tab, int s) {
  const int mm = tab.block(-1), mp = tab.block(1);
  const int M = mm + mp;
  return {std::max(0, M - tab.block(0)), std::min(s + 4 * std::min(mm, mp), M)};
}

/// Thinning term R: max over l of the double sum over (j, i), with
/// out-of-range binomials counted as zero. Throws EmptyRange when the
/// l-interval is empty.
template <class Count = BigCount>
Count superglue_R(const FiniteParams& p, const GlueConfig& cfg) {
  const auto [l_lo, l_hi] = superglue_l_range(cfg.table, cfg.s);
  if (l_lo > l_hi)
    throw BoundsError(ErrorCode::EmptyRange, "l-interval [" + std::to_string(l_lo) + ", " +
                                                 std::to_string(l_hi) + "] is empty");
  const Binomials<Count> C(std::max(p.n, 1));
  const auto terms = superglue_R_terms(p, cfg.table, C);
  Count best(0);
  for (int l = l_lo; l <= l_hi; ++l)
    if (terms[static_cast<std::size_t>(l)] > best) best = terms[static_cast<std::size_t>(l)];
  return best;
}

inline BoundResult superglue_lower_bound(const FiniteParams& p, const GlueConfig& cfg,
                                         std::optional<BigCount> h_override = std::nullopt) {
  validate_finite(p);
  const auto& tab = cfg.table;
  validate_table(tab, p);
  auto fail = [&](std::string why) {
    auto r = BoundResult::unmet(TheoremId::T7, ErrorCode::ConstraintUnmet, std::move(why));
    r.witness.table = tab;
    r.witness.t1 = cfg.t1;
    r.witness.s = cfg.s;
    return r;
  };
  const int M = tab.block(-1) + tab.block(1);
  if (cfg.t1 < 0) return fail("t1 < 0");
  if (cfg.t1 > p.t) return fail("t1 > t");
  if (table_mdp_sum(tab) <= p.t) return fail("block mdp sum <= t");
  if (cfg.t1 + glue_cross_slack(tab) > p.t)
    return fail("t1 + 2 extras + 2(m_{1,0} + m_{-1,0}) > t");
  if (!(cfg.t1 < cfg.s && cfg.s < M)) return fail("need t1 < s < m_{-1} + m_1");
  if (p.t - 2 * (tab.cell(1, 0) + tab.cell(-1, 0)) < 0)
    return fail("t - 2(m_{1,0} + m_{-1,0}) < 0");

  std::vector<std::string> notes;
  BigCount R;
  try {
    R = superglue_R(p, cfg);
  } catch (const BoundsError& e) {
    if (e.code() != ErrorCode::EmptyRange) throw;
    R = 0;
    notes.push_back("EmptyRange: R = 0");
  }
  const BigCount h = h_override ? *h_override : vg_family_size(block_profile(p, tab, cfg.s));
  const BigCount C0 =
      binom(tab.block(0), tab.cell(-1, 0)) * binom(tab.cell(0, 0) + tab.cell(1, 0), tab.cell(0, 0));
  BigCount value = h * (ak_product(tab) - h * C0 * R);
  if (value < 0) {
    value = 0;
    notes.push_back("vacuous: subtracted term exceeds the product, clamped to 0");
  }
  auto r = BoundResult::met(TheoremId::T7, value);
  r.notes = std::move(notes);
  r.witness.table = tab;
  r.witness.t1 = cfg.t1;
  r.witness.s = cfg.s;
  r.witness.h = h;
  return r;
}

inline BoundResult pairs_lower_bound(const FiniteParams& p) {
  validate_finite(p);
  std::string why;
  if (p.n % 2 != 0) why += "n odd; ";
  if ((p.k_1 + p.k_m1) % 2 != 0) why += "k_1 + k_{-1} odd; ";
  if (p.t % 2 == 0) why += "t even; ";
  if (!why.empty()) {
    why.resize(why.size() - 2);
    return BoundResult::unmet(TheoremId::T8, ErrorCode::ConditionsUnmet, why);
  }
  return BoundResult::met(TheoremId::T8,
                          binom(p.n / 2, (p.k_1 + p.k_m1) / 2) * binom(p.k_1 + p.k_m1, p.k_1));
}

}  // namespace indep_bounds
