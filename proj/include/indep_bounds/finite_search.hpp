#pragma once

// Parameter choice for the table-based bounds (T3, T4, T6, T7) at a given n:
// every table on small instances, otherwise the asymptotic optimum scaled
// by n, rounded and repaired. Also log-domain evaluation of each bound at
// large n for comparison with its growth rate.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indep_bounds/asymptotics.hpp"
#include "indep_bounds/bound_result.hpp"
#include "indep_bounds/combinatorics.hpp"
#include "indep_bounds/lower_bounds.hpp"
#include "indep_bounds/parameters.hpp"
#include "indep_bounds/upper_bounds.hpp"

namespace indep_bounds {

inline constexpr std::size_t kExhaustiveTableCap = 5000;

namespace detail {

/// Integers summing to `total`, each floor(want) or floor(want) + 1;
/// the largest fractional parts are rounded up (ties: lower index).
inline std::array<int, 3> largest_remainder(const std::array<double, 3>& want, int total) {
  std::array<int, 3> out{};
  int sum = 0;
  for (int i = 0; i < 3; ++i) {
    out[i] = static_cast<int>(std::floor(want[i] + 1e-9));
    sum += out[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return want[a] - out[a] > want[b] - out[b];
  });
  for (int i = 0; sum < total; i = (i + 1) % 3, ++sum) ++out[order[i]];
  for (int i = 2; sum > total; i = (i + 2) % 3) {
    if (out[order[i]] > 0) {
      --out[order[i]];
      --sum;
    }
  }
  return out;
}

inline std::optional<PartitionTable> shifted(const PartitionTable& t, int a, int b, int b2) {
  if (t.cell(a, b) == 0) return std::nullopt;
  PartitionTable u = t;
  --u.cell(a, b);
  ++u.cell(a, b2);
  u.sync_blocks();
  return u;
}

/// Unit moves within rows, each chosen to reduce `violation` the most,
/// until it reaches 0. nullopt when no move helps.
template <class V>
std::optional<PartitionTable> repair_table(PartitionTable tab, V&& violation, int max_moves = 2000) {
  for (int step = 0; step < max_moves; ++step) {
    const double v = violation(tab);
    if (v <= 0) return tab;
    std::optional<PartitionTable> best;
    double best_v = v;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int b2 = -1; b2 <= 1; ++b2) {
          if (b == b2) continue;
          const auto u = shifted(tab, a, b, b2);
          if (!u) continue;
          const double vu = violation(*u);
          if (vu < best_v) {
            best_v = vu;
            best = u;
          }
        }
    if (!best) return std::nullopt;
    tab = *best;
  }
  return violation(tab) <= 0 ? std::optional<PartitionTable>(tab) : std::nullopt;
}

/// Steepest ascent of `score` (nullopt = infeasible) over unit moves.
template <class S>
std::pair<PartitionTable, double> integer_ascent(PartitionTable tab, double f, S&& score) {
  for (int step = 0; step < 100000; ++step) {
    std::optional<PartitionTable> best;
    double best_f = f;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int b2 = -1; b2 <= 1; ++b2) {
          if (b == b2) continue;
          const auto u = shifted(tab, a, b, b2);
          if (!u) continue;
          const auto fu = score(*u);
          if (fu && *fu > best_f + 1e-12) {
            best_f = *fu;
            best = u;
          }
        }
    if (!best) break;
    tab = *best;
    f = best_f;
  }
  return {tab, f};
}

inline double log2_of(const LogCount& c) { return c.is_zero ? neg_inf() : c.log2_value; }

inline double log2_ak_product(const PartitionTable& tab) {
  double s = 0;
  for (int b = -1; b <= 1; ++b)
    s += log2_of(log2_binom(tab.block(b), tab.cell(-1, b))) +
         log2_of(log2_binom(tab.cell(0, b) + tab.cell(1, b), tab.cell(0, b)));
  return s;
}

inline double log2_ponrai_factor(const FiniteParams& p, const PartitionTable& tab) {
  double s = log2_of(log2_binom(p.n, tab.block(-1))) +
             log2_of(log2_binom(tab.block(0) + tab.block(1), tab.block(0)));
  for (int a = -1; a <= 1; ++a)
    s -= log2_of(log2_binom(p.k(a), tab.cell(a, -1))) +
         log2_of(log2_binom(tab.cell(a, 0) + tab.cell(a, 1), tab.cell(a, 1)));
  return s;
}

inline long double log2_ld(long double v) { return v > 0 ? std::log2(v) : -INFINITY; }

/// |V| / d for the block profile at threshold `threshold`, evaluated in
/// long double (h >= 1).
inline long double vg_family_ld(const FiniteParams& q) {
  const long double d = vg_dominated_count<long double>(q);
  const Binomials<long double> C(q.n);
  const long double v = C(q.n, q.k_m1) * C(q.n - q.k_m1, q.k_0);
  return d <= 0 ? v : std::max<long double>(1.0L, std::ceil(v / d));
}

inline int t7_cross_extra(const PartitionTable& tab) { return 2 * (tab.cell(1, 0) + tab.cell(-1, 0)); }

}  // namespace detail

/// k_alpha = k'_alpha n (largest remainder) and t = round(t' n).
inline FiniteParams scale_params(const AsymptoticParams& kp, int n) {
  const auto k = detail::largest_remainder({kp.kp_m1 * n, kp.kp_0 * n, kp.kp_1 * n}, n);
  return FiniteParams{n, k[0], k[1], k[2], static_cast<int>(std::lround(kp.tp * n))};
}

/// n * ft rounded so that row alpha sums to k_alpha.
inline PartitionTable round_table(const FractionalTable& ft, const FiniteParams& p) {
  PartitionTable t;
  for (int a = -1; a <= 1; ++a) {
    const double row = ft.row_sum(a);
    std::array<double, 3> want{};
    for (int b = -1; b <= 1; ++b)
      want[b + 1] = row > 0 ? ft.cell(a, b) / row * p.k(a) : (b == 1 ? p.k(a) : 0.0);
    const auto r = detail::largest_remainder(want, p.k(a));
    for (int b = -1; b <= 1; ++b) t.cell(a, b) = r[b + 1];
  }
  t.sync_blocks();
  return t;
}

inline std::size_t table_count(const FiniteParams& p) {
  std::size_t c = 1;
  for (int a = -1; a <= 1; ++a) c *= static_cast<std::size_t>(p.k(a) + 1) * (p.k(a) + 2) / 2;
  return c;
}

/// Every table with row sums k, in lexicographic order of the cells.
template <class F>
void for_each_table(const FiniteParams& p, F&& f) {
  PartitionTable t;
  const int km = p.k_m1, k0 = p.k_0, k1 = p.k_1;
  for (int a0 = 0; a0 <= km; ++a0)
    for (int a1 = 0; a0 + a1 <= km; ++a1)
      for (int b0 = 0; b0 <= k0; ++b0)
        for (int b1 = 0; b0 + b1 <= k0; ++b1)
          for (int c0 = 0; c0 <= k1; ++c0)
            for (int c1 = 0; c0 + c1 <= k1; ++c1) {
              t.c = {{{a0, a1, km - a0 - a1}, {b0, b1, k0 - b0 - b1}, {c0, c1, k1 - c0 - c1}}};
              t.sync_blocks();
              f(t);
            }
}

/// Best thinning threshold s for a table (t1 = 0), scored in long double.
struct SuperglueChoice {
  int s = 0;
  long double value = 0;  // h (prod - h C0 R)
};

inline std::optional<SuperglueChoice> best_superglue_s(const FiniteParams& p, const PartitionTable& tab) {
  const int M = tab.block(-1) + tab.block(1);
  if (M < 2 || table_mdp_sum(tab) <= p.t || glue_cross_slack(tab) > p.t ||
      detail::t7_cross_extra(tab) > p.t)
    return std::nullopt;
  const Binomials<long double> C(p.n);
  const FiniteParams q{p.n, tab.block(-1), tab.block(0), tab.block(1), 0};
  const auto hist = dot_histogram(q, C);
  const auto at_least = at_least_counts(hist);
  const int offset = q.k_1 + q.k_m1;
  const long double v = C(p.n, q.k_m1) * C(p.n - q.k_m1, q.k_0);
  const auto terms = superglue_R_terms<long double>(p, tab, C);
  const long double prod = ak_product<long double>(tab, C);
  const long double c0 = C(tab.block(0), tab.cell(-1, 0)) * C(tab.cell(0, 0) + tab.cell(1, 0), tab.cell(0, 0));
  std::optional<SuperglueChoice> best;
  for (int s = 1; s < M; ++s) {
    const long double d = s > offset ? 0.0L : at_least[static_cast<std::size_t>(s + offset)];
    const long double h = d <= 0 ? v : std::max<long double>(1.0L, std::ceil(v / d));
    const auto [l_lo, l_hi] = superglue_l_range(tab, s);
    long double R = 0;
    for (int l = l_lo; l <= l_hi; ++l) R = std::max(R, terms[static_cast<std::size_t>(l)]);
    const long double value = h * (prod - h * c0 * R);
    if (value > 0 && (!best || value > best->value)) best = SuperglueChoice{s, value};
  }
  return best;
}

/// Table (and t1, s where relevant) for one of T3, T4, T6, T7.
struct TableChoice {
  PartitionTable table;
  int t1 = 0;
  int s = 0;
  std::string how;
};

namespace detail {

/// Objective to maximise (log2); T3 is negated since it is minimised.
inline std::optional<double> table_score(TheoremId id, const FiniteParams& p, const PartitionTable& tab,
                                         int* s_out = nullptr) {
  switch (id) {
    case TheoremId::T3: {
      const int q = p.nonzero() - p.t;
      if (table_mdp_sum(tab) < p.nonzero() - 2 * q + 1) return std::nullopt;
      return -log2_ponrai_factor(p, tab);
    }
    case TheoremId::T4:
      if (table_mdp_sum(tab) <= p.t) return std::nullopt;
      return log2_ak_product(tab);
    case TheoremId::T6: {
      if (table_mdp_sum(tab) <= p.t) return std::nullopt;
      const FiniteParams q = block_profile(p, tab, p.t - glue_cross_slack(tab));
      return static_cast<double>(log2_ld(vg_family_ld(q))) + log2_ak_product(tab);
    }
    case TheoremId::T7: {
      const auto c = best_superglue_s(p, tab);
      if (!c) return std::nullopt;
      if (s_out) *s_out = c->s;
      return static_cast<double>(log2_ld(c->value));
    }
    default: return std::nullopt;
  }
}

inline double table_violation(TheoremId id, const FiniteParams& p, const PartitionTable& tab) {
  const double mdp_sum = table_mdp_sum(tab);
  switch (id) {
    case TheoremId::T3: return std::max(0.0, p.nonzero() - 2.0 * (p.nonzero() - p.t) + 1 - mdp_sum);
    case TheoremId::T7:
      return std::max(0.0, p.t + 1 - mdp_sum) + std::max(0, glue_cross_slack(tab) - p.t) +
             std::max(0, t7_cross_extra(tab) - p.t);
    default: return std::max(0.0, p.t + 1 - mdp_sum);
  }
}

inline TableChoice finish_choice(TheoremId id, const FiniteParams& p, const PartitionTable& tab,
                                 std::string how) {
  TableChoice c{tab, 0, 0, std::move(how)};
  if (id == TheoremId::T6) c.t1 = p.t - glue_cross_slack(tab);
  if (id == TheoremId::T7) table_score(id, p, tab, &c.s);
  return c;
}

}  // namespace detail

/// Parameters for a table-based bound on instance p; nullopt when no table
/// satisfies the theorem's constraints (or, at large n, none was found
/// near the scaled asymptotic optimum).
inline std::optional<TableChoice> choose_table(TheoremId id, const FiniteParams& p,
                                               const SearchOptions& opt = {}) {
  validate_finite(p);
  if (table_count(p) <= kExhaustiveTableCap) {
    std::optional<PartitionTable> best;
    double best_score = 0;
    std::size_t n_tables = 0;
    for_each_table(p, [&](const PartitionTable& t) {
      ++n_tables;
      const auto sc = detail::table_score(id, p, t);
      if (sc && (!best || *sc > best_score + 1e-12)) {
        best = t;
        best_score = *sc;
      }
    });
    if (!best) return std::nullopt;
    return detail::finish_choice(id, p, *best,
                                 "exhaustive over " + std::to_string(n_tables) + " tables");
  }
  if (p.n == 0) return std::nullopt;
  const AsymptoticParams kp{static_cast<double>(p.k_m1) / p.n, static_cast<double>(p.k_0) / p.n,
                            static_cast<double>(p.k_1) / p.n, static_cast<double>(p.t) / p.n};
  CurvePoint cp;
  try {
    cp = lambda_of(id, kp, opt);
  } catch (const BoundsError&) {
    return std::nullopt;
  }
  if (!cp.table) return std::nullopt;
  const auto repaired = detail::repair_table(round_table(*cp.table, p), [&](const PartitionTable& t) {
    return detail::table_violation(id, p, t);
  });
  if (!repaired) return std::nullopt;
  PartitionTable tab = *repaired;
  if (id == TheoremId::T3 || id == TheoremId::T4) {
    const auto f0 = detail::table_score(id, p, tab);
    if (!f0) return std::nullopt;
    tab = detail::integer_ascent(tab, *f0, [&](const PartitionTable& t) {
            return detail::table_score(id, p, t);
          }).first;
  }
  if (!detail::table_score(id, p, tab)) return std::nullopt;
  return detail::finish_choice(id, p, tab, "scaled asymptotic optimum, rounded");
}

/// Exact finite bound of any theorem, choosing tables/t1/s where needed.
inline BoundResult best_finite_bound(TheoremId id, const FiniteParams& p, const SearchOptions& opt = {}) {
  validate_finite(p);
  switch (id) {
    case TheoremId::T1: return fw_upper_bound(p);
    case TheoremId::T2: return flower_upper_bound(p);
    case TheoremId::T5: return vg_lower_bound(p);
    case TheoremId::T8: return pairs_lower_bound(p);
    case TheoremId::T3: {
      const auto probe = ponrai_upper_bound(p, single_block_table(p));
      if (probe.failure == ErrorCode::ConditionsUnmet) return probe;
      break;
    }
    default: break;
  }
  const auto choice = choose_table(id, p, opt);
  if (!choice)
    return BoundResult::unmet(id, ErrorCode::Infeasible, "no table satisfies the constraints");
  BoundResult r;
  switch (id) {
    case TheoremId::T3: r = ponrai_upper_bound(p, choice->table); break;
    case TheoremId::T4: r = ak_lower_bound(p, choice->table); break;
    case TheoremId::T6: r = glue_lower_bound(p, GlueConfig{choice->table, choice->t1, 0}); break;
    default: r = superglue_lower_bound(p, GlueConfig{choice->table, 0, choice->s}); break;
  }
  r.notes.push_back("table: " + choice->how);
  return r;
}

// ---------------------------------------------------------------------------
// Log-domain evaluation at large n.

struct FiniteRate {
  FiniteParams params;
  bool ok = false;
  double log2_value = 0.0;
  std::string why;

  double rate() const { return log2_value / params.n; }
};

namespace detail {

/// Nearest t (in |t - t0|, then smaller t) for which `ok(t)` holds.
template <class Ok>
std::optional<int> nearest_t(int t0, int lo, int hi, Ok&& ok, int radius = 40) {
  for (int r = 0; r <= radius; ++r)
    for (int t : {t0 - r, t0 + r}) {
      if (t < lo || t > hi) continue;
      if (ok(t)) return t;
    }
  return std::nullopt;
}

}  // namespace detail

/// log2 of a theorem's finite bound at the instance nearest to n * kp that
/// satisfies its integrality side conditions, with tables taken from the
/// asymptotic witness `cp`. Upper bounds are taken uncapped except T1.
inline FiniteRate finite_log2_bound(TheoremId id, const AsymptoticParams& kp, int n, const CurvePoint& cp) {
  FiniteRate out;
  FiniteParams p = scale_params(kp, n);
  out.params = p;
  auto fail = [&](std::string why) {
    out.ok = false;
    out.why = std::move(why);
    return out;
  };
  const int K = p.nonzero();
  switch (id) {
    case TheoremId::T1:
    case TheoremId::T2: {
      const auto t = detail::nearest_t(p.t, -K, K, [&](int t) {
        FiniteParams q = p;
        q.t = t;
        return (id == TheoremId::T1 ? fw_upper_bound(q) : flower_upper_bound(q)).conditions_met;
      });
      if (!t) return fail("no nearby t meets the conditions");
      p.t = *t;
      const auto r = id == TheoremId::T1 ? fw_upper_bound(p) : flower_upper_bound(p);
      out.params = p;
      out.ok = true;
      out.log2_value = log2_exact(id == TheoremId::T1 ? *r.capped : *r.value);
      return out;
    }
    case TheoremId::T3: {
      if (!cp.table) return fail("no asymptotic table");
      const auto t = detail::nearest_t(p.t, -K, K, [&](int t) {
        FiniteParams q = p;
        q.t = t;
        return ponrai_upper_bound(q, single_block_table(q)).failure != ErrorCode::ConditionsUnmet;
      });
      if (!t) return fail("no nearby t meets the conditions");
      p.t = *t;
      out.params = p;
      const auto tab = detail::repair_table(round_table(*cp.table, p), [&](const PartitionTable& u) {
        return detail::table_violation(id, p, u);
      });
      if (!tab) return fail("rounded table cannot be repaired");
      const auto r = ponrai_upper_bound(p, *tab);
      if (!r.conditions_met) return fail(r.reason);
      out.ok = true;
      out.log2_value = log2_exact(*r.value);
      return out;
    }
    case TheoremId::T5: {
      out.ok = true;
      out.log2_value = static_cast<double>(detail::log2_ld(detail::vg_family_ld(p)));
      return out;
    }
    case TheoremId::T8: {
      if (p.n % 2 != 0) return fail("n odd");
      if (K % 2 != 0) {
        if (p.k_0 > 0) {
          ++p.k_1;
          --p.k_0;
        } else {
          --p.k_1;
          ++p.k_0;
        }
      }
      if (p.t % 2 == 0) p.t += (kp.tp * n >= p.t) ? 1 : -1;
      out.params = p;
      const auto r = pairs_lower_bound(p);
      if (!r.conditions_met) return fail(r.reason);
      out.ok = true;
      out.log2_value = log2_exact(*r.value);
      return out;
    }
    default: break;
  }
  if (!cp.table) return fail("no asymptotic table");
  const auto tab = detail::repair_table(round_table(*cp.table, p), [&](const PartitionTable& u) {
    return detail::table_violation(id, p, u);
  });
  if (!tab) return fail("rounded table cannot be repaired");
  const auto sc = detail::table_score(id, p, *tab);
  if (!sc) return fail("rounded table violates the constraints");
  out.ok = true;
  out.log2_value = *sc;
  return out;
}

}  // namespace indep_bounds
