#pragma once

// Oracle invariant campaign over every small tuple: mdp and d-count against
// brute force, construction sizes, and the sandwich lower <= alpha <= upper.
//
// The sandwich never needs alpha itself. A lower bound is certified by an
// independent set of at least its size (the theorem's own construction
// where one is implemented, a targeted search otherwise); an upper bound U
// by a search showing no independent set exceeds U. Exact alpha is reported
// when the full search finishes inside the node budget.

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "indep_bounds/bound_result.hpp"
#include "indep_bounds/finite_search.hpp"
#include "indep_bounds/lower_bounds.hpp"
#include "indep_bounds/oracle.hpp"
#include "indep_bounds/parameters.hpp"
#include "indep_bounds/upper_bounds.hpp"

namespace indep_bounds {

struct VerifyOptions {
  int max_n = 6;
  std::int64_t max_vertices = kDefaultExactCap;
  std::uint64_t node_budget = 50'000;  // per search
  int jobs = 1;
};

struct BoundCheck {
  TheoremId theorem = TheoremId::T1;
  BigCount value = 0;  // capped for upper bounds
  std::string certificate;  // how the comparison with alpha was settled
};

struct TupleReport {
  FiniteParams params;
  BigCount vertices = 0;
  std::optional<int> alpha;
  std::vector<BoundCheck> bounds;
  std::vector<std::string> invariant_failures;  // d-count, construction sizes
  std::vector<std::string> sandwich_failures;

  bool ok() const { return invariant_failures.empty() && sandwich_failures.empty(); }
  std::vector<std::string> failures() const {
    auto all = invariant_failures;
    all.insert(all.end(), sandwich_failures.begin(), sandwich_failures.end());
    return all;
  }
};

struct VerifyReport {
  std::vector<TupleReport> tuples;
  std::vector<std::string> profile_failures;  // mdp, AK and pairs sets

  std::size_t invariant_failures() const {
    std::size_t n = profile_failures.size();
    for (const auto& t : tuples) n += t.invariant_failures.size();
    return n;
  }
  std::size_t sandwich_failures() const {
    std::size_t n = 0;
    for (const auto& t : tuples) n += t.sandwich_failures.size();
    return n;
  }
  std::size_t failures() const { return invariant_failures() + sandwich_failures(); }
  bool ok() const { return failures() == 0; }
};

/// Tuples with n <= max_n, mdp <= t <= k_{-1} + k_1 and |V| <= max_vertices,
/// ordered by (n, k_{-1}, k_1, t).
inline std::vector<FiniteParams> verify_tuples(int max_n, std::int64_t max_vertices) {
  std::vector<FiniteParams> out;
  for (int n = 1; n <= max_n; ++n)
    for (int a = 0; a <= n; ++a)
      for (int c = 0; a + c <= n; ++c) {
        const int lo = mdp(a, n - a - c, c);
        for (int t = lo; t <= a + c; ++t) {
          const FiniteParams p{n, a, n - a - c, c, t};
          if (vertex_count(p) <= max_vertices) out.push_back(p);
        }
      }
  return out;
}

namespace detail {

inline std::string size_text(const VectorSet& s) { return std::to_string(s.size()); }

/// An explicit independent set backing a lower bound, when one is built.
inline std::optional<VectorSet> construction_for(const BoundResult& r, const FiniteParams& p) {
  switch (r.theorem) {
    case TheoremId::T4: return build_ak_set(p, *r.witness.table);
    case TheoremId::T5: return build_vg_set(p);
    case TheoremId::T6: return build_glue_set(p, *r.witness.table, *r.witness.t1);
    case TheoremId::T8: return build_pairs_set(p);
    default: return std::nullopt;
  }
}

inline void check_lower(const BoundResult& r, const FiniteParams& p, const VerifyOptions& opt,
                        TupleReport& rep) {
  const auto tag = to_string(r.theorem);
  BoundCheck bc{r.theorem, *r.value, ""};
  if (rep.alpha) {
    bc.certificate = "exact alpha";
    if (BigCount(*rep.alpha) < *r.value)
      rep.sandwich_failures.push_back(tag + " lower " + r.value->str() + " > alpha " +
                             std::to_string(*rep.alpha));
  }
  if (const auto set = construction_for(r, p)) {
    const bool indep = verify_independent(*set, p.t, PairMode::NotEqual);
    if (!indep) rep.sandwich_failures.push_back(tag + " construction is not independent");
    if (BigCount(set->size()) < *r.value)
      rep.sandwich_failures.push_back(tag + " construction has " + size_text(*set) + " < " + r.value->str());
    if (r.theorem == TheoremId::T4 || r.theorem == TheoremId::T8) {
      if (BigCount(set->size()) != *r.value)
        rep.invariant_failures.push_back(tag + " construction size " + size_text(*set) + " != " + r.value->str());
    }
    if (bc.certificate.empty()) bc.certificate = "construction of size " + size_text(*set);
  } else if (bc.certificate.empty()) {
    const auto q = independent_set_of_size(p, static_cast<std::size_t>(*r.value), opt.node_budget);
    if (q.answer == Answer::Yes && verify_independent(q.witness, p.t, PairMode::NotEqual)) {
      bc.certificate = "independent set found by search";
    } else if (q.answer == Answer::No) {
      rep.sandwich_failures.push_back(tag + " lower " + r.value->str() + " exceeds alpha");
    } else {
      rep.sandwich_failures.push_back(tag + " undecided: search budget exhausted");
    }
  }
  rep.bounds.push_back(std::move(bc));
}

inline void check_upper(const BoundResult& r, const FiniteParams& p, const VerifyOptions& opt,
                        TupleReport& rep) {
  const auto tag = to_string(r.theorem);
  const BigCount u = *r.capped;
  BoundCheck bc{r.theorem, u, ""};
  if (rep.alpha) {
    bc.certificate = "exact alpha";
    if (BigCount(*rep.alpha) > u)
      rep.sandwich_failures.push_back(tag + " upper " + u.str() + " < alpha " + std::to_string(*rep.alpha));
  } else if (u >= rep.vertices) {
    bc.certificate = "at least |V|";
  } else {
    switch (independence_number_at_most(p, static_cast<std::size_t>(u), opt.node_budget)) {
      case Answer::Yes: bc.certificate = "search: no larger independent set"; break;
      case Answer::No: rep.sandwich_failures.push_back(tag + " upper " + u.str() + " < alpha"); break;
      case Answer::Unknown:
        rep.sandwich_failures.push_back(tag + " undecided: search budget exhausted");
        break;
    }
  }
  rep.bounds.push_back(std::move(bc));
}

}  // namespace detail

inline TupleReport verify_tuple(const FiniteParams& p, const VerifyOptions& opt = {}) {
  TupleReport rep;
  rep.params = p;
  rep.vertices = vertex_count(p);
  try {
    if (p.n <= 8 && vg_dominated_count(p) != brute_d_count(p))
      rep.invariant_failures.push_back("d-count " + vg_dominated_count(p).str() + " != brute " +
                             brute_d_count(p).str());
    rep.alpha = independence_number_within(p, opt.node_budget, opt.max_vertices);
    for (auto id : kAllTheorems) {
      const auto r = best_finite_bound(id, p);
      if (!r.conditions_met || !r.value) continue;
      if (r.kind == BoundKind::Lower)
        detail::check_lower(r, p, opt, rep);
      else
        detail::check_upper(r, p, opt, rep);
    }
  } catch (const BoundsError& e) {
    rep.sandwich_failures.push_back(std::string("error: ") + e.what());
  }
  return rep;
}

namespace detail {

/// mdp against brute force and every AK set against its product formula,
/// once per profile.
inline std::vector<std::string> verify_profile(int n, int a, int c) {
  std::vector<std::string> out;
  const FiniteParams p{n, a, n - a - c, c, 0};
  const std::string name = "(" + std::to_string(n) + ";" + std::to_string(a) + "," +
                           std::to_string(n - a - c) + "," + std::to_string(c) + ")";
  if (n <= 10 && mdp(a, n - a - c, c) != brute_mdp(a, n - a - c, c))
    out.push_back(name + " mdp " + std::to_string(mdp(a, n - a - c, c)) + " != brute " +
                  std::to_string(brute_mdp(a, n - a - c, c)));
  for_each_table(p, [&](const PartitionTable& tab) {
    const auto set = build_ak_set(p, tab);
    if (BigCount(set.size()) != ak_product(tab))
      out.push_back(name + " AK set size " + std::to_string(set.size()) + " != product");
    const int t = table_mdp_sum(tab) - 1;
    if (!verify_independent(set, t, PairMode::NotEqual))
      out.push_back(name + " AK set has dot " + std::to_string(t));
  });
  if (n % 2 == 0 && (a + c) % 2 == 0) {
    const FiniteParams odd{n, a, n - a - c, c, 1};
    const auto set = build_pairs_set(odd);
    if (BigCount(set.size()) != *pairs_lower_bound(odd).value)
      out.push_back(name + " pairs set size " + std::to_string(set.size()) + " != product");
    for (const auto& x : set.members)
      for (const auto& y : set.members)
        if (dot(x, y) % 2 != 0) {
          out.push_back(name + " pairs set has an odd dot product");
          return out;
        }
  }
  return out;
}

}  // namespace detail

/// Runs every check; results are in tuple order whatever `jobs` is.
inline VerifyReport verify_all(const VerifyOptions& opt) {
  VerifyReport rep;
  const auto tuples = verify_tuples(opt.max_n, opt.max_vertices);
  rep.tuples.resize(tuples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tuples.size(); i = next++) rep.tuples[i] = verify_tuple(tuples[i], opt);
  };
  const int jobs = std::max(1, opt.jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (int n = 1; n <= opt.max_n; ++n)
    for (int a = 0; a <= n; ++a)
      for (int c = 0; a + c <= n; ++c) {
        if (vertex_count(FiniteParams{n, a, n - a - c, c, 0}) > opt.max_vertices) continue;
        for (auto& f : detail::verify_profile(n, a, c)) rep.profile_failures.push_back(std::move(f));
      }
  return rep;
}

}  // namespace indep_bounds
