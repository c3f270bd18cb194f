#pragma once

// Linear-algebra upper bounds (T1, T2, T3), closed forms only.

#include <optional>
#include <string>

#include "indep_bounds/bound_result.hpp"
#include "indep_bounds/combinatorics.hpp"
#include "indep_bounds/lower_bounds.hpp"
#include "indep_bounds/parameters.hpp"

namespace indep_bounds {

/// sum over {(i, j) : i + j <= n, i + 2j <= q - 1} of C(n, i) C(n - i, j).
template <class Count = BigCount>
Count polynomial_space_sum(int n, int q, const Binomials<Count>& C) {
  Count s(0);
  for (int i = 0; i <= n && i <= q - 1; ++i)
    for (int j = 0; i + j <= n && i + 2 * j <= q - 1; ++j) s += C(n, i) * C(n - i, j);
  return s;
}

inline BigCount polynomial_space_sum(int n, int q) {
  Binomials<BigCount> C(std::max(n, 0));
  return polynomial_space_sum(n, q, C);
}

namespace detail {

inline void attach_cap(BoundResult& r, const FiniteParams& p) {
  const BigCount v = vertex_count(p);
  r.capped = *r.value < v ? *r.value : v;
  if (*r.value > v) r.notes.push_back("raw value exceeds |V|; capped at |V|");
}

inline BigCount floor_of(const Rational& x) {
  return numerator(x) / denominator(x);  // x >= 0
}

}  // namespace detail

inline BoundResult fw_upper_bound(const FiniteParams& p_in) {
  validate_finite(p_in);
  const FiniteParams p = canonical_form(p_in).params;
  const int q = p.nonzero() - p.t;
  auto unmet = [&](std::string why) {
    auto r = BoundResult::unmet(TheoremId::T1, ErrorCode::ConditionsUnmet, std::move(why));
    r.witness.q = q;
    return r;
  };
  if (2 * p.nonzero() > p.n) return unmet("k_1 + k_{-1} > n/2");
  if (!is_prime_power(q)) return unmet("q = " + std::to_string(q) + " is not a prime power");
  if (!(p.nonzero() - 2 * q < -2 * p.k_m1)) return unmet("k_1 + k_{-1} - 2q >= -2 k_{-1}");
  auto r = BoundResult::met(TheoremId::T1, polynomial_space_sum(p.n, q));
  r.witness.q = q;
  detail::attach_cap(r, p);
  return r;
}

/// Natural r with K(2 + (d2-1)/(r+1)) <= n1 < K(2 + (d2-1)/r), K = k2-d2+1.
inline std::optional<int> flower_r(int n1, int k2, int d2) {
  const std::int64_t K = k2 - d2 + 1;
  if (K <= 0 || d2 < 1) return std::nullopt;
  const std::int64_t limit = (static_cast<std::int64_t>(d2) + 1) * (n1 + 2) + 2;
  for (std::int64_t r = 1; r <= limit; ++r) {
    const bool lower = K * (2 * (r + 1) + d2 - 1) <= static_cast<std::int64_t>(n1) * (r + 1);
    const bool upper = static_cast<std::int64_t>(n1) * r < K * (2 * r + d2 - 1);
    if (lower && upper) return static_cast<int>(r);
  }
  return std::nullopt;
}

inline BoundResult flower_upper_bound(const FiniteParams& p_in) {
  validate_finite(p_in);
  const FiniteParams p = canonical_form(p_in).params;
  const int km = p.k_m1, k1 = p.k_1, k0 = p.k_0, n = p.n, t = p.t;
  const int q = k1 + km - t;
  auto unmet = [&](ErrorCode code, std::string why) {
    auto r = BoundResult::unmet(TheoremId::T2, code, std::move(why));
    r.witness.q = q;
    return r;
  };
  if (2 * k1 > n - km) return unmet(ErrorCode::ConditionsUnmet, "k_1 > (n - k_{-1})/2");
  if (km > t) return unmet(ErrorCode::ConditionsUnmet, "k_{-1} > t");
  if (!is_prime_power(q))
    return unmet(ErrorCode::ConditionsUnmet, "q = " + std::to_string(q) + " is not a prime power");

  const Binomials<BigCount> C(n);
  if (2 * (t - km) < k1) {
    BigCount sum = 0;
    for (int i = 0; i <= q - 1; ++i) sum += C(k1 + k0, i);
    auto r = BoundResult::met(TheoremId::T2, C(n, km) * sum);
    r.witness.q = q;
    r.notes.push_back("case 1");
    detail::attach_cap(r, p);
    return r;
  }

  const int d = 2 * (t - km) - k1 + 1;
  std::optional<Rational> best;
  FlowerInternals best_split;
  int skipped = 0;
  for (int d1 = 1; d1 <= d - 1; ++d1) {
    const int d2 = d - d1;
    const int n1 = (n - km) - d1;
    const int k2 = k1 - d1;
    const auto r = flower_r(n1, k2, d2);
    if (!r) {
      ++skipped;
      continue;
    }
    const BigCount den = C(k2, d2 + *r) * C(n1 - k2, *r) * C(k1, d1);
    if (den == 0) {
      ++skipped;
      continue;
    }
    BigCount sum = 0;
    for (int i = 0; i <= q - 1; ++i) sum += C(n1, i);
    const BigCount num = C(n, km) * C(n1, d2 + 2 * *r) * C(n - km, d1) * sum;
    const Rational value(num, den);
    if (!best || value < *best) {
      best = value;
      best_split = FlowerInternals{q, d, d1, d2, n1, k2, *r};
    }
  }
  if (!best)
    return unmet(ErrorCode::NoValidR, "no split d1 + d2 = " + std::to_string(d) +
                                          " admits a natural r");
  auto res = BoundResult::met(TheoremId::T2, detail::floor_of(*best));
  res.exact = *best;
  res.witness.q = q;
  res.witness.flower = best_split;
  res.notes.push_back("case 2");
  if (skipped > 0) res.notes.push_back(std::to_string(skipped) + " split(s) skipped: no valid r");
  detail::attach_cap(res, p);
  return res;
}

/// n!/(m_{-1}! m_0! m_1!) * prod_alpha (prod_beta m_{alpha,beta}!)/k_alpha!.
inline Rational ponrai_factor_factorial_form(const FiniteParams& p, const PartitionTable& tab) {
  auto fact = [](int k) {
    BigCount f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  BigCount num = fact(p.n);
  BigCount den = fact(tab.block(-1)) * fact(tab.block(0)) * fact(tab.block(1));
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) num *= fact(tab.cell(a, b));
    den *= fact(p.k(a));
  }
  return Rational(num, den);
}

/// The same factor as a ratio of binomials.
inline Rational ponrai_factor_binomial_form(const FiniteParams& p, const PartitionTable& tab) {
  BigCount num = binom(p.n, tab.block(-1)) * binom(tab.block(0) + tab.block(1), tab.block(0));
  BigCount den = 1;
  for (int a = -1; a <= 1; ++a)
    den *= binom(p.k(a), tab.cell(a, -1)) *
           binom(tab.cell(a, 0) + tab.cell(a, 1), tab.cell(a, 1));
  return Rational(num, den);
}

inline BoundResult ponrai_upper_bound(const FiniteParams& p_in, const PartitionTable& tab_in) {
  validate_finite(p_in);
  validate_table(tab_in, p_in);
  const auto canon = canonical_form(p_in);
  const FiniteParams& p = canon.params;
  const PartitionTable tab = canon.negated ? tab_in.negated() : tab_in;
  const int q = p.nonzero() - p.t;
  auto unmet = [&](ErrorCode code, std::string why) {
    auto r = BoundResult::unmet(TheoremId::T3, code, std::move(why));
    r.witness.q = q;
    r.witness.table = tab_in;
    return r;
  };
  if (2 * p.nonzero() > p.n) return unmet(ErrorCode::ConditionsUnmet, "k_1 + k_{-1} > n/2");
  if (!is_prime_power(q))
    return unmet(ErrorCode::ConditionsUnmet, "q = " + std::to_string(q) + " is not a prime power");
  if (p.nonzero() - 2 * q < -2 * p.k_m1)
    return unmet(ErrorCode::ConditionsUnmet, "k_1 + k_{-1} - 2q < -2 k_{-1}");
  const int d = p.nonzero() - 2 * q + 1;
  if (table_mdp_sum(tab) < d)
    return unmet(ErrorCode::InvalidTable, "block mdp sum " + std::to_string(table_mdp_sum(tab)) +
                                              " < d = " + std::to_string(d));
  const Rational exact = ponrai_factor_binomial_form(p, tab) * Rational(polynomial_space_sum(p.n, q));
  auto r = BoundResult::met(TheoremId::T3, detail::floor_of(exact));
  r.exact = exact;
  r.witness.q = q;
  r.witness.table = tab_in;
  detail::attach_cap(r, p);
  return r;
}

}  // namespace indep_bounds
