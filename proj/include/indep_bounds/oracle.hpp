#pragma once

// Ground truth at desk scale: explicit vertex sets, exact independence
// numbers and the explicit constructions behind the lower bounds.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "indep_bounds/combinatorics.hpp"
#include "indep_bounds/errors.hpp"
#include "indep_bounds/lower_bounds.hpp"
#include "indep_bounds/parameters.hpp"

namespace indep_bounds {

using Vector = std::vector<std::int8_t>;

struct VectorSet {
  std::vector<Vector> members;
  FiniteParams params;

  std::size_t size() const { return members.size(); }
};

inline int dot(const Vector& x, const Vector& y) {
  int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline constexpr std::int64_t kDefaultEnumerationCap = 1'000'000;
inline constexpr std::int64_t kDefaultExactCap = 400;

/// Enumeration cap, overridable through INDEP_BOUNDS_ENUM_CAP.
inline std::int64_t enumeration_cap() {
  if (const char* env = std::getenv("INDEP_BOUNDS_ENUM_CAP")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultEnumerationCap;
}

/// All vectors of the given composition in lexicographic order (-1 < 0 < 1).
inline VectorSet enumerate_vertices(const FiniteParams& p) {
  validate_finite(p);
  const BigCount count = vertex_count(p);
  if (count > enumeration_cap())
    throw BoundsError(ErrorCode::TooLarge, "|V| = " + count.str() + " exceeds enumeration cap");
  VectorSet out{{}, p};
  out.members.reserve(count.convert_to<std::size_t>());
  Vector v;
  v.insert(v.end(), static_cast<std::size_t>(p.k_m1), std::int8_t{-1});
  v.insert(v.end(), static_cast<std::size_t>(p.k_0), std::int8_t{0});
  v.insert(v.end(), static_cast<std::size_t>(p.k_1), std::int8_t{1});
  do {
    out.members.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

enum class PairMode { NotEqual, Less };

/// True iff every pair of distinct members satisfies (x,y) != t (NotEqual)
/// or (x,y) < t (Less).
inline bool verify_independent(const VectorSet& set, int t, PairMode mode) {
  const auto& m = set.members;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      const int d = dot(m[i], m[j]);
      if (mode == PairMode::NotEqual ? d == t : d >= t) return false;
    }
  return true;
}

namespace detail {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  void and_with(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  }
  void and_not(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  }
  /// Index of the lowest set bit, or npos.
  std::size_t first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    return npos;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::uint64_t> words_;
};

/// Maximum clique by branch and bound with a greedy-colouring bound
/// (bitset colouring in degree order). Deterministic.
class MaxCliqueSolver {
 public:
  explicit MaxCliqueSolver(const std::vector<std::vector<bool>>& adj) : n_(adj.size()) {
    // Renumber by non-increasing degree; ties keep the input order.
    std::vector<std::size_t> deg(n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) deg[i] += adj[i][j] ? 1 : 0;
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });
    nbr_.assign(n_, Bitset(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && adj[order_[i]][order_[j]]) nbr_[i].set(j);
  }

  /// A maximum clique, or an empty vector when no clique is larger than
  /// `floor`.
  /// The search stops early once a clique of size `target` is found.
  std::vector<std::size_t> solve(std::size_t floor = 0,
                                 std::size_t target = static_cast<std::size_t>(-1)) {
    aborted_ = false;
    best_.clear();
    best_size_ = floor;
    target_ = target;
    current_.clear();
    Bitset all(n_);
    for (std::size_t i = 0; i < n_; ++i) all.set(i);
    if (n_ > 0) expand(all);
    std::vector<std::size_t> out;
    out.reserve(best_.size());
    for (auto v : best_) out.push_back(order_[v]);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Caps the number of search nodes; `aborted()` reports whether the cap
  /// cut the search short (the result is then only a lower bound).
  void set_node_budget(std::uint64_t* counter, std::uint64_t limit) {
    counter_ = counter;
    limit_ = limit;
  }
  bool aborted() const { return aborted_; }

 private:
  void colour(const Bitset& p, std::vector<std::size_t>& verts, std::vector<std::size_t>& cols) {
    verts.clear();
    cols.clear();
    Bitset uncoloured = p;
    std::size_t colour = 0;
    while (!uncoloured.none()) {
      ++colour;
      Bitset q = uncoloured;
      for (std::size_t v = q.first(); v != Bitset::npos; v = q.first()) {
        uncoloured.reset(v);
        q.reset(v);
        q.and_not(nbr_[v]);
        verts.push_back(v);
        cols.push_back(colour);
      }
    }
  }

  void expand(Bitset p) {
    if (counter_ != nullptr && ++*counter_ > limit_) {
      aborted_ = true;
      return;
    }
    std::vector<std::size_t> verts, cols;
    colour(p, verts, cols);
    for (std::size_t idx = verts.size(); idx-- > 0;) {
      if (aborted_ || current_.size() + cols[idx] <= best_size_ || best_size_ >= target_) return;
      const std::size_t v = verts[idx];
      current_.push_back(v);
      Bitset np = p;
      np.and_with(nbr_[v]);
      if (np.none()) {
        if (current_.size() > best_size_) {
          best_ = current_;
          best_size_ = best_.size();
        }
      } else {
        expand(np);
      }
      current_.pop_back();
      p.reset(v);
    }
  }

  std::size_t n_;
  std::vector<std::size_t> order_;
  std::vector<Bitset> nbr_;
  std::vector<std::size_t> current_, best_;
  std::size_t best_size_ = 0;
  std::size_t target_ = static_cast<std::size_t>(-1);
  std::uint64_t* counter_ = nullptr;
  std::uint64_t limit_ = 0;
  bool aborted_ = false;
};

inline VectorSet capped_vertices(const FiniteParams& p, std::int64_t cap) {
  validate_finite(p);
  const BigCount count = vertex_count(p);
  if (count > cap)
    throw BoundsError(ErrorCode::TooLarge,
                      "|V| = " + count.str() + " exceeds exact cap " + std::to_string(cap));
  return enumerate_vertices(p);
}

/// Clique search with orbital branching over coordinate permutations. Once a
/// prefix of family members is fixed, permutations preserving every
/// coordinate's column pattern fix the prefix; candidates fall into orbits
/// (identified by counts per (pattern cell, value)). Branch on one
/// representative per orbit: some optimal extension contains it, or else
/// avoids the whole orbit, so later branches drop that orbit entirely.
/// Without symmetry left, plain branch and bound takes over.
class SymmetricFamilySearch {
 public:
  SymmetricFamilySearch(const std::vector<Vector>& members, std::function<bool(int)> allowed_dot)
      : m_(members), allowed_(std::move(allowed_dot)) {
    const std::size_t n = m_.size();
    adj_.assign(n, Bitset(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (allowed_(dot(m_[i], m_[j]))) {
          adj_[i].set(j);
          adj_[j].set(i);
        }
  }

  /// The largest family found; only families larger than `floor` are
  /// recorded, and the search stops once one of size `target` is found.
  std::vector<std::size_t> run(std::size_t floor = 0,
                               std::size_t target = static_cast<std::size_t>(-1)) {
    best_.clear();
    bar_ = floor;
    target_ = target;
    aborted_ = false;
    std::vector<std::size_t> all(m_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> prefix;
    search(prefix, all);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

  void set_node_budget(std::uint64_t limit) { limit_ = limit; }
  bool aborted() const { return aborted_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  /// Greedy colouring of the candidates' induced graph: an upper bound on
  /// the clique they can add.
  std::size_t colour_bound(const std::vector<std::size_t>& cand) const {
    std::vector<std::vector<std::size_t>> classes;
    for (auto v : cand) {
      bool placed = false;
      for (auto& cl : classes) {
        if (std::none_of(cl.begin(), cl.end(), [&](std::size_t u) { return adj_[v].test(u); })) {
          cl.push_back(v);
          placed = true;
          break;
        }
      }
      if (!placed) classes.push_back({v});
    }
    return classes.size();
  }

  bool done() const { return aborted_ || bar_ >= target_; }

  void record(std::vector<std::size_t> family) {
    best_ = std::move(family);
    bar_ = best_.size();
  }

  void search(std::vector<std::size_t>& prefix, std::vector<std::size_t> cand) {
    if (done() || prefix.size() + cand.size() <= bar_) return;
    if (++nodes_ > limit_) {
      aborted_ = true;
      return;
    }
    if (prefix.size() > bar_) record(prefix);
    if (done() || cand.empty()) return;
    if (prefix.size() + colour_bound(cand) <= bar_) return;
    const std::size_t n = m_.front().size();
    std::vector<int> cell(n, 0);
    int cells = 1;
    if (!prefix.empty()) {
      std::vector<std::vector<std::int8_t>> patterns;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::int8_t> col;
        for (auto v : prefix) col.push_back(m_[v][i]);
        auto it = std::find(patterns.begin(), patterns.end(), col);
        cell[i] = static_cast<int>(it - patterns.begin());
        if (it == patterns.end()) patterns.push_back(std::move(col));
      }
      cells = static_cast<int>(patterns.size());
    }
    if (static_cast<std::size_t>(cells) == n) {
      finish(prefix, cand);
      return;
    }
    // orbits in order of first appearance
    std::vector<std::vector<int>> keys;
    std::vector<std::vector<std::size_t>> orbits;
    for (auto w : cand) {
      std::vector<int> key(static_cast<std::size_t>(3 * cells), 0);
      for (std::size_t i = 0; i < n; ++i) ++key[static_cast<std::size_t>(3 * cell[i] + m_[w][i] + 1)];
      auto it = std::find(keys.begin(), keys.end(), key);
      if (it == keys.end()) {
        keys.push_back(std::move(key));
        orbits.push_back({w});
      } else {
        orbits[static_cast<std::size_t>(it - keys.begin())].push_back(w);
      }
    }
    Bitset live(m_.size());
    for (auto c : cand) live.set(c);
    std::size_t remaining = cand.size();
    for (const auto& orbit : orbits) {
      if (done() || prefix.size() + remaining <= bar_) return;
      const std::size_t w = orbit.front();
      std::vector<std::size_t> next;
      for (auto c : cand)
        if (live.test(c) && adj_[w].test(c)) next.push_back(c);
      prefix.push_back(w);
      search(prefix, std::move(next));
      prefix.pop_back();
      for (auto c : orbit) live.reset(c);
      remaining -= orbit.size();
    }
  }

  void finish(const std::vector<std::size_t>& prefix, const std::vector<std::size_t>& cand) {
    std::vector<std::vector<bool>> adj(cand.size(), std::vector<bool>(cand.size(), false));
    for (std::size_t i = 0; i < cand.size(); ++i)
      for (std::size_t j = i + 1; j < cand.size(); ++j)
        adj[i][j] = adj[j][i] = adj_[cand[i]].test(cand[j]);
    const std::size_t floor = bar_ > prefix.size() ? bar_ - prefix.size() : 0;
    const std::size_t goal = target_ > prefix.size() ? target_ - prefix.size() : 0;
    MaxCliqueSolver solver(adj);
    solver.set_node_budget(&nodes_, limit_);
    const auto clique = solver.solve(floor, goal);
    if (solver.aborted()) aborted_ = true;
    if (!clique.empty() && prefix.size() + clique.size() > bar_) {
      auto family = prefix;
      for (auto i : clique) family.push_back(cand[i]);
      record(std::move(family));
    }
  }

  const std::vector<Vector>& m_;
  std::function<bool(int)> allowed_;
  std::vector<Bitset> adj_;
  std::vector<std::size_t> best_;
  std::size_t bar_ = 0;
  std::size_t target_ = static_cast<std::size_t>(-1);
  std::uint64_t nodes_ = 0;
  std::uint64_t limit_ = std::numeric_limits<std::uint64_t>::max();
  bool aborted_ = false;
};

struct FamilyOutcome {
  VectorSet family;
  bool complete = true;  // false when the node budget ran out
};

inline FamilyOutcome largest_family(const FiniteParams& p, PairMode mode, std::int64_t cap,
                                    std::size_t floor = 0,
                                    std::size_t target = static_cast<std::size_t>(-1),
                                    std::uint64_t budget = std::numeric_limits<std::uint64_t>::max()) {
  const VectorSet v = capped_vertices(p, cap);
  const int t = p.t;
  auto allowed = [mode, t](int d) { return mode == PairMode::NotEqual ? d != t : d < t; };
  SymmetricFamilySearch search(v.members, allowed);
  search.set_node_budget(budget);
  FamilyOutcome out{{{}, p}, true};
  for (auto i : search.run(floor, target)) out.family.members.push_back(v.members[i]);
  out.complete = !search.aborted();
  return out;
}

}  // namespace detail

/// A maximum independent set of G_n(k_{-1},k_0,k_1,t) (no loops).
inline VectorSet maximum_independent_set(const FiniteParams& p,
                                         std::int64_t cap = kDefaultExactCap) {
  return detail::largest_family(p, PairMode::NotEqual, cap).family;
}

inline int independence_number_exact(const FiniteParams& p, std::int64_t cap = kDefaultExactCap) {
  return static_cast<int>(maximum_independent_set(p, cap).size());
}

/// Largest family whose distinct members pairwise have dot product < t.
inline int h_exact(const FiniteParams& p, std::int64_t cap = kDefaultExactCap) {
  return static_cast<int>(detail::largest_family(p, PairMode::Less, cap).family.size());
}

/// Exact α when the search finishes within `budget` nodes.
inline std::optional<int> independence_number_within(const FiniteParams& p, std::uint64_t budget,
                                                     std::int64_t cap = kDefaultExactCap) {
  const auto r = detail::largest_family(p, PairMode::NotEqual, cap, 0,
                                        static_cast<std::size_t>(-1), budget);
  if (!r.complete) return std::nullopt;
  return static_cast<int>(r.family.size());
}

enum class Answer { Yes, No, Unknown };

struct SizeQuery {
  Answer answer = Answer::Unknown;
  VectorSet witness;  // an independent set of the asked size when Yes
};

/// Decision form of α ≥ size. Stops at the first set found, so it is far
/// cheaper than α itself; Unknown when `budget` search nodes run out.
inline SizeQuery independent_set_of_size(
    const FiniteParams& p, std::size_t size,
    std::uint64_t budget = std::numeric_limits<std::uint64_t>::max(),
    std::int64_t cap = kDefaultExactCap) {
  if (size == 0) return {Answer::Yes, VectorSet{{}, p}};
  auto r = detail::largest_family(p, PairMode::NotEqual, cap, size - 1, size, budget);
  if (r.family.size() >= size) {
    r.family.members.resize(size);
    return {Answer::Yes, std::move(r.family)};
  }
  return {r.complete ? Answer::No : Answer::Unknown, VectorSet{{}, p}};
}

/// Decision form of α ≤ bound.
inline Answer independence_number_at_most(
    const FiniteParams& p, std::size_t bound,
    std::uint64_t budget = std::numeric_limits<std::uint64_t>::max(),
    std::int64_t cap = kDefaultExactCap) {
  const auto r = detail::largest_family(p, PairMode::NotEqual, cap, bound, bound + 1, budget);
  if (!r.family.members.empty()) return Answer::No;
  return r.complete ? Answer::Yes : Answer::Unknown;
}

inline int brute_mdp(int k_m1, int k_0, int k_1) {
  if (k_m1 + k_0 + k_1 > 10) throw BoundsError(ErrorCode::TooLarge, "brute_mdp needs n <= 10");
  const FiniteParams p{k_m1 + k_0 + k_1, k_m1, k_0, k_1, 0};
  const auto v = enumerate_vertices(p);
  int best = k_m1 + k_1;
  for (const auto& x : v.members)
    for (const auto& y : v.members) best = std::min(best, dot(x, y));
  return best;
}

namespace detail {
inline BigCount count_at_least(const VectorSet& v, const Vector& x, int t) {
  BigCount c = 0;
  for (const auto& y : v.members)
    if (dot(x, y) >= t) ++c;
  return c;
}
}  // namespace detail

/// Number of y (y = x included) with (x, y) >= t for the lexicographically
/// first x; cross-checked against three other choices of x.
inline BigCount brute_d_count(const FiniteParams& p) {
  validate_finite(p);
  if (p.n > 8) throw BoundsError(ErrorCode::TooLarge, "brute_d_count needs n <= 8");
  const auto v = enumerate_vertices(p);
  const auto& m = v.members;
  const BigCount c = detail::count_at_least(v, m.front(), p.t);
  for (std::size_t idx : {m.size() / 3, m.size() / 2, m.size() - 1})
    if (detail::count_at_least(v, m[idx], p.t) != c)
      throw std::logic_error("brute_d_count: count depends on x for " + to_string(p));
  return c;
}

namespace detail {
/// Every arrangement of a block with the given (minus-ones, zeros, ones).
inline std::vector<Vector> block_arrangements(int a, int b, int c) {
  Vector v;
  v.insert(v.end(), static_cast<std::size_t>(a), std::int8_t{-1});
  v.insert(v.end(), static_cast<std::size_t>(b), std::int8_t{0});
  v.insert(v.end(), static_cast<std::size_t>(c), std::int8_t{1});
  std::vector<Vector> out;
  do {
    out.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}
}  // namespace detail

/// All vectors whose composition inside each block equals the table column.
/// Blocks are consecutive coordinate ranges in the order M_{-1}, M_0, M_1.
inline VectorSet build_ak_set(const FiniteParams& p, const PartitionTable& tab) {
  validate_finite(p);
  validate_table(tab, p);
  if (p.n > 14) throw BoundsError(ErrorCode::TooLarge, "build_ak_set needs n <= 14");
  VectorSet out{{Vector{}}, p};
  for (int b = -1; b <= 1; ++b) {
    const auto parts = detail::block_arrangements(tab.cell(-1, b), tab.cell(0, b), tab.cell(1, b));
    std::vector<Vector> next;
    next.reserve(out.members.size() * parts.size());
    for (const auto& prefix : out.members)
      for (const auto& part : parts) {
        Vector v = prefix;
        v.insert(v.end(), part.begin(), part.end());
        next.push_back(std::move(v));
      }
    out.members = std::move(next);
  }
  return out;
}

/// All vectors whose support is a union of whole pairs {1,2}, {3,4}, ...
inline VectorSet build_pairs_set(const FiniteParams& p) {
  validate_finite(p);
  if (p.n % 2 != 0 || (p.k_1 + p.k_m1) % 2 != 0 || p.t % 2 == 0)
    throw BoundsError(ErrorCode::ConditionsUnmet,
                      "pairs construction needs n and k_1 + k_{-1} even, t odd");
  if (p.n > 14) throw BoundsError(ErrorCode::TooLarge, "build_pairs_set needs n <= 14");
  const int pairs = p.n / 2;
  const int occupied = (p.k_1 + p.k_m1) / 2;
  // choose which pairs are occupied
  std::vector<std::int8_t> mask(static_cast<std::size_t>(pairs), 0);
  std::fill(mask.end() - occupied, mask.end(), std::int8_t{1});
  const auto signs = detail::block_arrangements(p.k_m1, 0, p.k_1);
  VectorSet out{{}, p};
  do {
    for (const auto& sg : signs) {
      Vector v(static_cast<std::size_t>(p.n), 0);
      std::size_t next_sign = 0;
      for (int i = 0; i < pairs; ++i) {
        if (!mask[static_cast<std::size_t>(i)]) continue;
        v[static_cast<std::size_t>(2 * i)] = sg[next_sign++];
        v[static_cast<std::size_t>(2 * i + 1)] = sg[next_sign++];
      }
      out.members.push_back(std::move(v));
    }
  } while (std::next_permutation(mask.begin(), mask.end()));
  std::sort(out.members.begin(), out.members.end());
  return out;
}

/// Greedy family in lexicographic order: keep each vector whose dot product
/// with every kept one is below t. A kept vector rules out at most d - 1
/// others, so at least |V|/d survive.
inline VectorSet build_vg_set(const FiniteParams& p) {
  const VectorSet v = enumerate_vertices(p);
  VectorSet out{{}, p};
  for (const auto& x : v.members)
    if (std::all_of(out.members.begin(), out.members.end(),
                    [&](const Vector& y) { return dot(x, y) < p.t; }))
      out.members.push_back(x);
  return out;
}

/// Glue construction: a greedy family of block labellings whose pairwise
/// dot products stay below t1, each expanded into the AK family laid out
/// along its own blocks.
inline VectorSet build_glue_set(const FiniteParams& p, const PartitionTable& tab, int t1) {
  validate_finite(p);
  validate_table(tab, p);
  const VectorSet labels = build_vg_set(block_profile(p, tab, t1));
  const VectorSet ak = build_ak_set(p, tab);
  VectorSet out{{}, p};
  for (const auto& z : labels.members) {
    std::vector<std::size_t> where;  // canonical coordinate -> position
    for (int b = -1; b <= 1; ++b)
      for (std::size_t i = 0; i < z.size(); ++i)
        if (z[i] == b) where.push_back(i);
    for (const auto& x : ak.members) {
      Vector y(x.size(), 0);
      for (std::size_t j = 0; j < x.size(); ++j) y[where[j]] = x[j];
      out.members.push_back(std::move(y));
    }
  }
  std::sort(out.members.begin(), out.members.end());
  out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
  return out;
}

}  // namespace indep_bounds
