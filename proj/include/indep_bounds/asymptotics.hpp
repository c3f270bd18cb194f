#pragma once

// Exponential growth rates: every bound is (lambda + o(1))^n with
// k_alpha ~ k'_alpha n, t ~ t' n. Exponents are in bits; lambda = 2^exponent.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "indep_bounds/bound_result.hpp"
#include "indep_bounds/combinatorics.hpp"
#include "indep_bounds/errors.hpp"
#include "indep_bounds/lower_bounds.hpp"
#include "indep_bounds/parameters.hpp"

namespace indep_bounds {

/// One (t', theorem) evaluation. When `feasible` is false, lambda is NaN and
/// failure/reason say why.
struct CurvePoint {
  double tp = 0.0;
  TheoremId theorem = TheoremId::T1;
  bool feasible = false;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::optional<ErrorCode> failure;
  std::string reason;
  std::optional<FractionalTable> table;
  std::vector<std::pair<std::string, double>> aux;  // t1', s', q', l', ...
  std::vector<std::string> notes;

  double exponent() const { return std::log2(lambda); }
};

struct SearchOptions {
  std::uint64_t seed = 1;
  int random_restarts = 4;
  std::size_t refined_seeds = 6;  // best seeds handed to the local search
  int jobs = 1;
};

inline double lambda_vertex(const AsymptoticParams& kp) {
  validate_asymptotic(kp);
  return std::exp2(ternary_entropy(kp.kp_m1, kp.kp_0, kp.kp_1));
}

// ---------------------------------------------------------------------------
// Largest-term maximisation over a box with a feasibility predicate.

struct SumRegion {
  std::vector<std::pair<double, double>> box;
  std::function<bool(const std::vector<double>&)> feasible;
  double grid_step = 1e-3;
  double refine_step = 1e-5;
};

struct SumMaxTerm {
  double exponent = -std::numeric_limits<double>::infinity();
  std::vector<double> argmax;

  double lambda() const { return std::exp2(exponent); }
};

/// Max of `f` over the feasible part of the box: dense grid, then a
/// shrinking coordinate search around the best grid point. Throws
/// EmptyRegion when no grid point is feasible.
inline SumMaxTerm lambda_sum_max_term(const std::function<double(const std::vector<double>&)>& f,
                                      const SumRegion& region) {
  const std::size_t dim = region.box.size();
  std::vector<std::size_t> counts(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    const double width = region.box[d].second - region.box[d].first;
    counts[d] = width <= 0 ? 1 : static_cast<std::size_t>(std::floor(width / region.grid_step + 1e-9)) + 2;
  }
  auto coord = [&](std::size_t d, std::size_t i) {
    return std::min(region.box[d].first + static_cast<double>(i) * region.grid_step,
                    region.box[d].second);
  };
  auto ok = [&](const std::vector<double>& x) {
    for (std::size_t d = 0; d < dim; ++d)
      if (x[d] < region.box[d].first || x[d] > region.box[d].second) return false;
    return !region.feasible || region.feasible(x);
  };
  SumMaxTerm best;
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> x(dim);
  bool any = false;
  while (true) {
    for (std::size_t d = 0; d < dim; ++d) x[d] = coord(d, idx[d]);
    if (ok(x)) {
      const double v = f(x);
      if (!any || v > best.exponent) {
        best.exponent = v;
        best.argmax = x;
        any = true;
      }
    }
    std::size_t d = 0;
    while (d < dim && ++idx[d] == counts[d]) idx[d++] = 0;
    if (d == dim) break;
  }
  if (!any) throw BoundsError(ErrorCode::EmptyRegion, "no feasible point in the summation region");
  // axis moves plus pairwise diagonals, so the search can slide along a
  // constraint face
  std::vector<std::vector<double>> moves;
  for (std::size_t d = 0; d < dim; ++d)
    for (double sign : {1.0, -1.0}) {
      std::vector<double> m(dim, 0.0);
      m[d] = sign;
      moves.push_back(m);
      for (std::size_t e = d + 1; e < dim; ++e)
        for (double s2 : {1.0, -1.0, 0.5, -0.5, 2.0, -2.0}) {
          auto m2 = m;
          m2[e] = s2;
          moves.push_back(m2);
        }
    }
  for (double step = region.grid_step / 2; step >= region.refine_step * (1 - 1e-9); step /= 2) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& m : moves) {
        auto y = best.argmax;
        for (std::size_t d = 0; d < dim; ++d) y[d] += m[d] * step;
        if (!ok(y)) continue;
        const double v = f(y);
        if (v > best.exponent + 1e-15) {
          best.exponent = v;
          best.argmax = y;
          improved = true;
        }
      }
    }
  }
  return best;
}

namespace detail {

using Cells = std::array<std::array<double, 3>, 3>;  // [alpha + 1][beta + 1]
using Triple = std::array<double, 3>;

inline double neg_inf() { return -std::numeric_limits<double>::infinity(); }

inline double pi_exponent(const FractionalTable& t) {
  double s = 0;
  for (int b = -1; b <= 1; ++b) s += mass_entropy({t.cell(-1, b), t.cell(0, b), t.cell(1, b)});
  return s;
}

inline double column_exponent(const FractionalTable& t, int b) {
  return mass_entropy({t.cell(-1, b), t.cell(0, b), t.cell(1, b)});
}

inline Triple block_sizes(const FractionalTable& t) {
  return {t.column_sum(-1), t.column_sum(0), t.column_sum(1)};
}

inline double entropy_of(const Triple& p) {
  const double s = p[0] + p[1] + p[2];
  if (s <= 0) return 0.0;
  return mass_entropy({p[0], p[1], p[2]}) / s;
}

// ---- d-exponent (Varshamov-Gilbert) -------------------------------------

/// Joint type of (x, y) maximising the count of y with (x, y) >= tau:
/// N_{ab} = u_a v_b e^{theta a b} with both marginals p.
struct DExponent {
  double value = 0.0;  // max sum_a p_a H(N_a / p_a)
  double theta = 0.0;
  Cells joint{};
};

/// Symmetric scaling N_{ab} = e^{w_a + w_b + theta a b} with row sums p,
/// solved by damped Newton steps on log row sums.
inline Cells scaled_joint(const Triple& p, double theta) {
  std::array<bool, 3> live{};
  Triple w{};
  for (int a = 0; a < 3; ++a) {
    live[a] = p[a] > 0;
    w[a] = live[a] ? std::log(p[a]) : 0.0;
  }
  auto joint = [&](const Triple& x) {
    Cells N{};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (live[a] && live[b]) N[a][b] = std::exp(x[a] + x[b] + theta * (a - 1) * (b - 1));
    return N;
  };
  auto residual = [&](const Cells& N, Triple& F) {
    double norm = 0;
    for (int a = 0; a < 3; ++a) {
      F[a] = 0;
      if (!live[a]) continue;
      F[a] = std::log(N[a][0] + N[a][1] + N[a][2]) - std::log(p[a]);
      norm = std::max(norm, std::abs(F[a]));
    }
    return norm;
  };
  Cells N = joint(w);
  Triple F{};
  double norm = residual(N, F);
  for (int it = 0; it < 100 && norm > 1e-15; ++it) {
    // J_ac = delta_ac + N_ac / r_a on live coordinates
    std::array<std::array<double, 4>, 3> A{};
    for (int a = 0; a < 3; ++a) {
      const double r = N[a][0] + N[a][1] + N[a][2];
      for (int c = 0; c < 3; ++c)
        A[a][c] = live[a] && live[c] ? (a == c ? 1.0 : 0.0) + N[a][c] / r : (a == c ? 1.0 : 0.0);
      A[a][3] = -F[a];
    }
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r)
        if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
      std::swap(A[col], A[piv]);
      for (int r = 0; r < 3; ++r) {
        if (r == col) continue;
        const double f = A[r][col] / A[col][col];
        for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
      }
    }
    Triple step{};
    for (int a = 0; a < 3; ++a) step[a] = A[a][3] / A[a][a];
    bool moved = false;
    double lambda = 1.0;
    for (int half = 0; half < 40 && !moved; ++half, lambda /= 2) {
      Triple x = w;
      for (int a = 0; a < 3; ++a) x[a] += lambda * step[a];
      const Cells Nx = joint(x);
      Triple Fx{};
      const double nx = residual(Nx, Fx);
      if (nx < norm) {
        w = x;
        N = Nx;
        F = Fx;
        norm = nx;
        moved = true;
      }
    }
    if (!moved) break;  // at rounding level
  }
  return N;
}

inline double expected_dot(const Cells& N) {
  return N[2][2] + N[0][0] - N[0][2] - N[2][0];
}

inline double row_entropy(const Cells& N) {
  double s = 0;
  for (int a = 0; a < 3; ++a) s += mass_entropy({N[a][0], N[a][1], N[a][2]});
  return s;
}

/// Exponent of the number of y with (x, y) >= tau n, x of composition p.
/// Returns nullopt when that number is 0 (tau above the maximum dot).
inline std::optional<DExponent> d_exponent(const Triple& p, double tau) {
  const double emax = p[0] + p[2];
  const double e0 = (p[2] - p[0]) * (p[2] - p[0]);
  if (tau > emax + 1e-13) return std::nullopt;
  if (tau <= e0) {
    Cells N{};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) N[a][b] = p[a] * p[b];
    return DExponent{row_entropy(N), 0.0, N};
  }
  if (tau >= emax - 1e-13) {
    Cells N{};
    for (int a = 0; a < 3; ++a) N[a][a] = p[a];
    return DExponent{0.0, std::numeric_limits<double>::infinity(), N};
  }
  double hi = 1.0;
  while (expected_dot(scaled_joint(p, hi)) < tau && hi < 200) hi *= 2;
  std::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      [&](double th) { return expected_dot(scaled_joint(p, th)) - tau; }, 0.0, hi,
      boost::math::tools::eps_tolerance<double>(50), iters);
  hi = bracket.second;
  const Cells N = scaled_joint(p, hi);
  return DExponent{row_entropy(N), hi, N};
}

/// Exponent of the Varshamov-Gilbert family size for profile p, threshold tau.
inline double vg_exponent(const Triple& p, double tau) {
  const auto d = d_exponent(p, tau);
  const double hp = entropy_of(p) * (p[0] + p[1] + p[2]);
  if (!d) return hp;
  return std::max(0.0, hp - d->value);
}

// ---- Ahlswede-Khachatrian product (Blahut-Arimoto per mdp piece) --------

// mdp of a column (a, b, c) is the max of these four linear forms.
inline constexpr std::array<std::array<double, 3>, 4> kMdpForms = {
    {{-2, 0, 0}, {0, 0, -2}, {-3, -1, 1}, {1, -1, -3}}};

/// g[alpha+1][beta+1] for the piece that uses form choice[beta+1] in column beta.
inline Cells piece_coefficients(const std::array<int, 3>& choice) {
  Cells g{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g[a][b] = kMdpForms[static_cast<std::size_t>(choice[b])][a];
  return g;
}

inline double linear_value(const Cells& g, const Cells& x) {
  double s = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s += g[a][b] * x[a][b];
  return s;
}

/// Maximiser of sum_b m_b H(col_b / m_b) + mu g.x over tables with row sums
/// k (Blahut-Arimoto iteration from uniform block sizes; `m` receives the
/// block sizes of the result).
inline Cells blahut_arimoto(const Triple& k, const Cells& g, double mu, Triple& m) {
  m = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  Cells w{};
  for (int a = 0; a < 3; ++a) {
    const double gmax = *std::max_element(g[a].begin(), g[a].end());
    for (int b = 0; b < 3; ++b) w[a][b] = std::exp2(mu * (g[a][b] - gmax));
  }
  Cells x{};
  for (int it = 0; it < 20000; ++it) {
    Triple mn{};
    for (int a = 0; a < 3; ++a) {
      if (k[a] <= 0) {
        x[a] = {0, 0, 0};
        continue;
      }
      double den = 0;
      for (int b = 0; b < 3; ++b) den += m[b] * w[a][b];
      for (int b = 0; b < 3; ++b) {
        x[a][b] = k[a] * m[b] * w[a][b] / den;
        mn[b] += x[a][b];
      }
    }
    double delta = 0;
    for (int b = 0; b < 3; ++b) delta = std::max(delta, std::abs(mn[b] - m[b]));
    m = mn;
    if (delta < 1e-14) break;
  }
  return x;
}

struct PieceOptimum {
  bool feasible = false;
  double value = neg_inf();
  Cells x{};
};

/// Best AK exponent on one linear piece of the mdp-sum constraint g.x >= t.
inline PieceOptimum solve_piece(const Triple& k, const Cells& g, double t) {
  PieceOptimum out;
  double reach = 0;
  Cells argmax_table{};
  for (int a = 0; a < 3; ++a) {
    const auto it = std::max_element(g[a].begin(), g[a].end());
    reach += k[a] * *it;
    argmax_table[a][static_cast<std::size_t>(it - g[a].begin())] = k[a];
  }
  if (reach < t - 1e-12) return out;
  Triple m{1.0 / 3, 1.0 / 3, 1.0 / 3};
  Cells x = blahut_arimoto(k, g, 0.0, m);
  if (linear_value(g, x) < t) {
    double lo = 0.0, hi = 1.0;
    Triple mh = m;
    Cells xh = blahut_arimoto(k, g, hi, mh);
    while (linear_value(g, xh) < t && hi < 1e4) {
      hi *= 2;
      xh = blahut_arimoto(k, g, hi, mh);
    }
    if (linear_value(g, xh) < t) {
      xh = argmax_table;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        Triple mm = mh;
        const Cells xm = blahut_arimoto(k, g, mid, mm);
        if (linear_value(g, xm) < t) {
          lo = mid;
        } else {
          hi = mid;
          xh = xm;
          mh = mm;
        }
      }
    }
    x = xh;
  }
  out.feasible = true;
  out.x = x;
  out.value = pi_exponent(FractionalTable::from_cells(x));
  return out;
}

/// All 64 piece optima, in a fixed order.
inline std::vector<PieceOptimum> ak_piece_optima(const Triple& k, double t) {
  std::vector<PieceOptimum> out;
  for (int c0 = 0; c0 < 4; ++c0)
    for (int c1 = 0; c1 < 4; ++c1)
      for (int c2 = 0; c2 < 4; ++c2) out.push_back(solve_piece(k, piece_coefficients({c0, c1, c2}), t));
  return out;
}

struct AkOptimum {
  bool feasible = false;
  double value = neg_inf();
  FractionalTable table;
};

/// max sum_b m_b H(col_b / m_b) over fractional tables with mdp sum >= t.
inline AkOptimum ak_optimum(const Triple& k, double t) {
  AkOptimum best;
  for (const auto& piece : ak_piece_optima(k, t))
    if (piece.feasible && piece.value > best.value + 1e-15) {
      best.feasible = true;
      best.value = piece.value;
      best.table = FractionalTable::from_cells(piece.x);
    }
  return best;
}

// ---- local search over fractional tables --------------------------------

/// Index of the mdp form attaining the column's mdp (first on ties).
inline int active_form(const FractionalTable& t, int b) {
  const Triple col{t.cell(-1, b), t.cell(0, b), t.cell(1, b)};
  int arg = 0;
  double best = neg_inf();
  for (int i = 0; i < 4; ++i) {
    const auto& f = kMdpForms[static_cast<std::size_t>(i)];
    const double v = f[0] * col[0] + f[1] * col[1] + f[2] * col[2];
    if (v > best + 1e-15) {
      best = v;
      arg = i;
    }
  }
  return arg;
}

/// Moves of mass between columns within a row, plus combinations that keep
/// the active linear piece of the mdp sum constant.
inline std::vector<Cells> search_directions(const FractionalTable& t) {
  std::vector<Cells> base;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int b2 = 0; b2 < 3; ++b2) {
        if (b == b2) continue;
        Cells d{};
        d[a][b] = 1;
        d[a][b2] = -1;
        base.push_back(d);
      }
  const Cells g = piece_coefficients({active_form(t, -1), active_form(t, 0), active_form(t, 1)});
  std::vector<Cells> out = base;
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = 0; j < base.size(); ++j) {
      const double gi = linear_value(g, base[i]), gj = linear_value(g, base[j]);
      if (i == j || std::abs(gj) < 1e-12 || std::abs(gi) < 1e-12) continue;
      Cells d{};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) d[a][b] = base[i][a][b] - gi / gj * base[j][a][b];
      out.push_back(d);
    }
  return out;
}

/// Compass search: first-improvement moves along the directions, halving the
/// step from 0.02 down to 1e-7. `eval` returns nullopt for infeasible tables.
template <class Eval>
std::pair<FractionalTable, double> pattern_search(FractionalTable x, double fx, Eval&& eval) {
  for (double step = 0.02; step >= 1e-7; step /= 2) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& d : search_directions(x)) {
        for (double sign : {1.0, -1.0}) {
          FractionalTable y = x;
          bool ok = true;
          for (int a = 0; a < 3 && ok; ++a)
            for (int b = 0; b < 3 && ok; ++b) {
              y.c[a][b] += sign * step * d[a][b];
              if (y.c[a][b] < 0) {
                if (y.c[a][b] < -1e-15) ok = false;
                y.c[a][b] = 0;
              }
            }
          if (!ok) continue;
          y.sync_blocks();
          const auto fy = eval(y);
          if (fy && *fy > fx + 1e-14) {
            x = y;
            fx = *fy;
            improved = true;
            break;
          }
        }
      }
    }
  }
  return {x, fx};
}

inline FractionalTable identity_table(const Triple& k) {
  Cells c{};
  for (int a = 0; a < 3; ++a) c[a][a] = k[a];
  return FractionalTable::from_cells(c);
}

inline FractionalTable random_table(const Triple& k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Cells c{};
  for (int a = 0; a < 3; ++a) {
    Triple w{};
    double s = 0;
    for (auto& wi : w) s += (wi = std::pow(u(rng), 3));
    for (int b = 0; b < 3; ++b) c[a][b] = k[a] * w[b] / s;
  }
  return FractionalTable::from_cells(c);
}

/// Seeds: the distinct piece optima of the AK problem, the identity table
/// and a few seeded random tables; the best few feasible ones are refined.
template <class Eval>
std::optional<std::pair<FractionalTable, double>> optimise_tables(const Triple& k, double t,
                                                                  Eval&& eval,
                                                                  const SearchOptions& opt) {
  std::vector<FractionalTable> seeds;
  for (const auto& piece : ak_piece_optima(k, t))
    if (piece.feasible) seeds.push_back(FractionalTable::from_cells(piece.x));
  seeds.push_back(identity_table(k));
  std::mt19937_64 rng(opt.seed);
  for (int r = 0; r < opt.random_restarts; ++r) seeds.push_back(random_table(k, rng));

  std::vector<std::pair<FractionalTable, double>> scored;
  for (const auto& s : seeds) {
    const auto f = eval(s);
    if (!f) continue;
    const bool dup = std::any_of(scored.begin(), scored.end(), [&](const auto& e) {
      double dist = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) dist = std::max(dist, std::abs(e.first.c[a][b] - s.c[a][b]));
      return dist < 1e-9;
    });
    if (!dup) scored.emplace_back(s, *f);
  }
  if (scored.empty()) return std::nullopt;
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::pair<FractionalTable, double>> chosen(
      scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(std::min(opt.refined_seeds, scored.size())));
  std::optional<std::pair<FractionalTable, double>> best;
  for (auto& [x, fx] : chosen) {
    auto r = pattern_search(x, fx, eval);
    if (!best || r.second > best->second + 1e-15) best = r;
  }
  return best;
}

// ---- super-glue pieces ----------------------------------------------------

/// Exponent of the thinning term R at threshold s' (-inf when R = 0).
inline double superglue_r_exponent(const FractionalTable& t, double tp, double sp) {
  const double mm = t.column_sum(-1), m0 = t.column_sum(0), mp = t.column_sum(1);
  const double M = mm + mp;
  const double K = t.cell(1, 1) + t.cell(1, -1) + t.cell(-1, -1) + t.cell(-1, 1);
  const double K1 = t.cell(1, 1) + t.cell(1, -1);
  const double j0 = tp - 2 * (t.cell(1, 0) + t.cell(-1, 0));
  const double l_lo = std::max({0.0, M - m0, j0});
  const double l_hi = std::min(sp + 4 * std::min(mm, mp), M);
  if (l_lo > l_hi + 1e-15) return neg_inf();
  // g(l) = max_j [l H(j/l) + (M-l) H((K-j)/(M-l))], concave in l
  auto g = [&](double l) {
    const double lo = std::max({j0, K - (M - l), 0.0});
    const double hi = std::min(l, K);
    if (lo > hi + 1e-15) return neg_inf();
    const double j = M > 0 ? std::clamp(l * K / M, lo, std::max(lo, hi)) : 0.0;
    return mass_entropy({j, l - j}) + mass_entropy({K - j, (M - l) - (K - j)});
  };
  double a = l_lo, b = std::max(l_lo, l_hi);
  const double phi = 0.5 * (std::sqrt(5.0) - 1);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (gc < gd) {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g(d);
    } else {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g(c);
    }
  }
  const double best = std::max({g(l_lo), g(std::max(l_lo, l_hi)), g(0.5 * (a + b))});
  if (!std::isfinite(best)) return neg_inf();
  return mass_entropy({K1, K - K1}) + best;
}

struct SuperglueEval {
  double value = neg_inf();
  double s = 0.0;
};

inline constexpr double kSuperglueMargin = 1e-6;

/// Best exponent of the thinned construction for a fixed table (t1' = 0):
/// the largest s' in (0, m_{-1} + m_1) keeping h C R exponentially below Pi.
inline std::optional<SuperglueEval> superglue_for_table(const FractionalTable& t, double tp) {
  if (table_mdp_sum(t) < tp - 1e-12) return std::nullopt;
  if (glue_cross_slack(t) > tp + 1e-12) return std::nullopt;
  const Triple m = block_sizes(t);
  const double M = m[0] + m[2];
  if (M <= 1e-12) return std::nullopt;
  const double side = column_exponent(t, -1) + column_exponent(t, 1);
  auto violates = [&](double s) {
    return vg_exponent(m, s) + superglue_r_exponent(t, tp, s) >= side - kSuperglueMargin;
  };
  const double s_min = 1e-12;
  if (violates(s_min)) return std::nullopt;
  double s;
  if (!violates(M)) {
    s = M;
  } else {
    double lo = s_min, hi = M;
    for (int it = 0; it < 45; ++it) {
      const double mid = 0.5 * (lo + hi);
      (violates(mid) ? hi : lo) = mid;
    }
    s = lo;
  }
  return SuperglueEval{pi_exponent(t) + vg_exponent(m, s), s};
}

// ---- upper-bound exponents ------------------------------------------------

/// Exponent of sum_{i + 2j <= q} C(n, i) C(n - i, j): max of H(i, j, 1-i-j)
/// on that triangle (grid + refinement).
inline SumMaxTerm polynomial_space_exponent(double qp) {
  if (qp <= 0) return SumMaxTerm{0.0, {0.0, 0.0}};
  SumRegion region;
  region.box = {{0.0, std::min(1.0, qp)}, {0.0, std::min(1.0, qp / 2)}};
  region.feasible = [qp](const std::vector<double>& v) {
    return v[0] + 2 * v[1] <= qp + 1e-15 && v[0] + v[1] <= 1.0;
  };
  return lambda_sum_max_term(
      [](const std::vector<double>& v) {
        return mass_entropy({v[0], v[1], std::max(0.0, 1.0 - v[0] - v[1])});
      },
      region);
}

/// The same maximum in closed form: i = z/(1+z+z^2), j = z^2/(1+z+z^2)
/// with i + 2j = min(q', 1).
inline double polynomial_space_exponent_closed(double qp) {
  if (qp <= 0) return 0.0;
  if (qp >= 1.0) return std::log2(3.0);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double z = 0.5 * (lo + hi);
    const double s = 1 + z + z * z;
    ((z + 2 * z * z) / s < qp ? lo : hi) = z;
  }
  const double z = 0.5 * (lo + hi), s = 1 + z + z * z;
  return ternary_entropy(1 / s, z / s, z * z / s);
}

inline double bin_entropy_exp(double total, double part) {
  if (total <= 0) return 0.0;
  return total * binary_entropy(std::clamp(part / total, 0.0, 1.0));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-theorem rates.

namespace detail {

inline CurvePoint point(TheoremId id, double tp) {
  CurvePoint p;
  p.theorem = id;
  p.tp = tp;
  return p;
}

inline CurvePoint fail_point(TheoremId id, double tp, ErrorCode code, std::string why) {
  CurvePoint p = point(id, tp);
  p.failure = code;
  p.reason = std::move(why);
  return p;
}

inline CurvePoint ok_point(TheoremId id, double tp, double exponent) {
  CurvePoint p = point(id, tp);
  p.feasible = true;
  p.lambda = std::exp2(exponent);
  return p;
}

inline Triple triple(const AsymptoticParams& kp) { return {kp.kp_m1, kp.kp_0, kp.kp_1}; }

inline CurvePoint rate_t4(const AsymptoticParams& kp) {
  const auto best = ak_optimum(triple(kp), kp.tp);
  if (!best.feasible)
    return fail_point(TheoremId::T4, kp.tp, ErrorCode::Infeasible, "no table with mdp sum > t'");
  auto p = ok_point(TheoremId::T4, kp.tp, best.value);
  p.table = best.table;
  return p;
}

inline CurvePoint rate_t5(const AsymptoticParams& kp) {
  const Triple k = triple(kp);
  const auto d = d_exponent(k, kp.tp);
  auto p = ok_point(TheoremId::T5, kp.tp, vg_exponent(k, kp.tp));
  if (!d) {
    p.notes.push_back("DegenerateD: t' above the maximum dot product, family is all of V");
  } else {
    p.aux.emplace_back("d_exponent", d->value);
    p.aux.emplace_back("theta", std::isfinite(d->theta) ? d->theta : 0.0);
  }
  return p;
}

inline CurvePoint rate_t6(const AsymptoticParams& kp, const SearchOptions& opt) {
  const Triple k = triple(kp);
  const double tp = kp.tp;
  auto eval = [tp](const FractionalTable& t) -> std::optional<double> {
    if (table_mdp_sum(t) < tp - 1e-12) return std::nullopt;
    return pi_exponent(t) + vg_exponent(block_sizes(t), tp - glue_cross_slack(t));
  };
  const auto best = optimise_tables(k, tp, eval, opt);
  if (!best)
    return fail_point(TheoremId::T6, tp, ErrorCode::Infeasible, "no table with mdp sum > t'");
  auto p = ok_point(TheoremId::T6, tp, best->second);
  p.table = best->first;
  p.aux.emplace_back("t1", tp - glue_cross_slack(best->first));
  return p;
}

inline CurvePoint rate_t7(const AsymptoticParams& kp, const SearchOptions& opt) {
  const Triple k = triple(kp);
  const double tp = kp.tp;
  auto eval = [tp](const FractionalTable& t) -> std::optional<double> {
    const auto r = superglue_for_table(t, tp);
    if (!r) return std::nullopt;
    return r->value;
  };
  const auto best = optimise_tables(k, tp, eval, opt);
  if (!best)
    return fail_point(TheoremId::T7, tp, ErrorCode::Infeasible,
                      "no table admits t1' = 0 and a threshold s' with h C R below the product");
  auto p = ok_point(TheoremId::T7, tp, best->second);
  p.table = best->first;
  p.aux.emplace_back("t1", 0.0);
  p.aux.emplace_back("s", superglue_for_table(best->first, tp)->s);
  return p;
}

inline double t8_exponent(const AsymptoticParams& kp) {
  const double K = kp.kp_m1 + kp.kp_1;
  if (K <= 0) return 0.0;
  return 0.5 * binary_entropy(K) + K * binary_entropy(kp.kp_1 / K);
}

inline CurvePoint rate_t8(const AsymptoticParams& kp) {
  auto p = ok_point(TheoremId::T8, kp.tp, t8_exponent(kp));
  p.notes.push_back("parity conditions waived asymptotically");
  return p;
}

inline CurvePoint rate_t1(const AsymptoticParams& kp_in) {
  const auto kp = canonical_form(kp_in);
  const double K = kp.nonzero(), qp = K - kp.tp;
  if (2 * K > 1 + 1e-12)
    return fail_point(TheoremId::T1, kp.tp, ErrorCode::ConditionsUnmet, "k'_1 + k'_{-1} > 1/2");
  if (!(K - 2 * qp < -2 * kp.kp_m1 - 1e-12))
    return fail_point(TheoremId::T1, kp.tp, ErrorCode::ConditionsUnmet,
                      "k'_1 + k'_{-1} - 2q' >= -2k'_{-1}");
  const auto raw = detail::polynomial_space_exponent(qp);
  const double hv = ternary_entropy(kp.kp_m1, kp.kp_0, kp.kp_1);
  auto p = ok_point(TheoremId::T1, kp.tp, std::min(raw.exponent, hv));
  p.aux.emplace_back("q", qp);
  p.aux.emplace_back("i", raw.argmax[0]);
  p.aux.emplace_back("j", raw.argmax[1]);
  p.aux.emplace_back("raw_lambda", std::exp2(raw.exponent));
  if (raw.exponent > hv) p.notes.push_back("raw value exceeds |V|; capped at |V|");
  return p;
}

/// Exponent of T2 case 2 for a split d1' of d' (nullopt: no valid r).
inline std::optional<std::pair<double, double>> flower_case2_exponent(const AsymptoticParams& kp,
                                                                      double dp, double d1) {
  const double a = kp.kp_m1, c = kp.kp_1, qp = kp.nonzero() - kp.tp;
  const double d2 = dp - d1;
  const double n1 = (1 - a) - d1, k2 = c - d1;
  const double Kp = k2 - d2;
  if (d2 <= 0 || Kp <= 0 || n1 <= 2 * Kp) return std::nullopt;
  const double r = d2 / (n1 / Kp - 2);
  if (d2 + r > k2 || r > n1 - k2 || d2 + 2 * r > n1) return std::nullopt;
  const double num = binary_entropy(a) + bin_entropy_exp(n1, d2 + 2 * r) +
                     bin_entropy_exp(1 - a, d1) + bin_entropy_exp(n1, std::min(qp, n1 / 2));
  const double den = bin_entropy_exp(k2, d2 + r) + bin_entropy_exp(n1 - k2, r) + bin_entropy_exp(c, d1);
  return std::make_pair(num - den, r);
}

inline CurvePoint rate_t2(const AsymptoticParams& kp_in) {
  const auto kp = canonical_form(kp_in);
  const double a = kp.kp_m1, c = kp.kp_1, tp = kp.tp, qp = kp.nonzero() - tp;
  if (std::abs(c - a) < 1e-12)
    return fail_point(TheoremId::T2, tp, ErrorCode::ConditionsUnmet,
                      "k'_1 = k'_{-1}: the bound is not competitive and is not evaluated");
  if (2 * c > 1 - a + 1e-12)
    return fail_point(TheoremId::T2, tp, ErrorCode::ConditionsUnmet, "k'_1 > (1 - k'_{-1})/2");
  if (a > tp)
    return fail_point(TheoremId::T2, tp, ErrorCode::ConditionsUnmet, "k'_{-1} > t'");
  if (2 * (tp - a) < c) {
    auto p = ok_point(TheoremId::T2, tp,
                      binary_entropy(a) + bin_entropy_exp(1 - a, std::min(qp, (1 - a) / 2)));
    p.aux.emplace_back("q", qp);
    p.notes.push_back("case 1");
    return p;
  }
  const double dp = 2 * (tp - a) - c;
  std::optional<std::pair<double, double>> best;
  double best_d1 = 0;
  const int grid = 2000;
  for (int i = 1; i < grid; ++i) {
    const double d1 = dp * i / grid;
    const auto e = flower_case2_exponent(kp, dp, d1);
    if (e && (!best || e->first < best->first)) {
      best = e;
      best_d1 = d1;
    }
  }
  if (!best)
    return fail_point(TheoremId::T2, tp, ErrorCode::NoValidR, "no split d'_1 + d'_2 admits r'");
  // refine the split
  for (double step = dp / grid; step > 1e-10; step /= 2)
    for (double sign : {1.0, -1.0}) {
      const double d1 = best_d1 + sign * step;
      if (d1 <= 0 || d1 >= dp) continue;
      const auto e = flower_case2_exponent(kp, dp, d1);
      if (e && e->first < best->first) {
        best = e;
        best_d1 = d1;
      }
    }
  auto p = ok_point(TheoremId::T2, tp, best->first);
  p.aux.emplace_back("q", qp);
  p.aux.emplace_back("d", dp);
  p.aux.emplace_back("d1", best_d1);
  p.aux.emplace_back("d2", dp - best_d1);
  p.aux.emplace_back("r", best->second);
  p.notes.push_back("case 2");
  return p;
}

inline CurvePoint rate_t3(const AsymptoticParams& kp_in) {
  const auto kp = canonical_form(kp_in);
  const double K = kp.nonzero(), qp = K - kp.tp, dp = K - 2 * qp;
  if (2 * K > 1 + 1e-12)
    return fail_point(TheoremId::T3, kp.tp, ErrorCode::ConditionsUnmet, "k'_1 + k'_{-1} > 1/2");
  if (dp < -2 * kp.kp_m1 - 1e-12)
    return fail_point(TheoremId::T3, kp.tp, ErrorCode::ConditionsUnmet,
                      "k'_1 + k'_{-1} - 2q' < -2k'_{-1}");
  // The rational factor has exponent H(k') - sum_b m_b H(col_b / m_b), so the
  // best table is the AK optimum at threshold d'.
  const Triple k = triple(kp);
  const auto ak = ak_optimum(k, dp);
  if (!ak.feasible)
    return fail_point(TheoremId::T3, kp.tp, ErrorCode::InvalidTable, "no table with mdp sum >= d'");
  const double hv = ternary_entropy(k[0], k[1], k[2]);
  const auto poly = polynomial_space_exponent(qp);
  auto p = ok_point(TheoremId::T3, kp.tp, hv - ak.value + poly.exponent);
  // the table is for the canonical profile; report it for the one asked
  p.table = kp_in.kp_m1 > kp_in.kp_1 ? ak.table.negated() : ak.table;
  p.aux.emplace_back("q", qp);
  p.aux.emplace_back("d", dp);
  return p;
}

}  // namespace detail

/// lambda of a lower bound (T4..T8). Prime-power and parity side conditions
/// are waived; failures are reported inside the point.
inline CurvePoint lambda_lower(TheoremId id, const AsymptoticParams& kp,
                               const SearchOptions& opt = {}) {
  validate_asymptotic(kp);
  switch (id) {
    case TheoremId::T4: return detail::rate_t4(kp);
    case TheoremId::T5: return detail::rate_t5(kp);
    case TheoremId::T6: return detail::rate_t6(kp, opt);
    case TheoremId::T7: return detail::rate_t7(kp, opt);
    case TheoremId::T8: return detail::rate_t8(kp);
    default: throw std::invalid_argument(to_string(id) + " is not a lower bound");
  }
}

/// lambda of an upper bound (T1..T3).
inline CurvePoint lambda_upper(TheoremId id, const AsymptoticParams& kp) {
  validate_asymptotic(kp);
  switch (id) {
    case TheoremId::T1: return detail::rate_t1(kp);
    case TheoremId::T2: return detail::rate_t2(kp);
    case TheoremId::T3: return detail::rate_t3(kp);
    default: throw std::invalid_argument(to_string(id) + " is not an upper bound");
  }
}

inline CurvePoint lambda_of(TheoremId id, const AsymptoticParams& kp, const SearchOptions& opt = {}) {
  return kind_of(id) == BoundKind::Upper ? lambda_upper(id, kp) : lambda_lower(id, kp, opt);
}

/// One point per (t', theorem) in grid-major order. Points are computed on
/// `opt.jobs` threads; the order of the result never depends on scheduling.
inline std::vector<CurvePoint> sweep(const AsymptoticParams& kp, const std::vector<double>& grid,
                                     const std::vector<TheoremId>& theorems,
                                     const SearchOptions& opt = {}) {
  validate_asymptotic(kp);
  std::vector<CurvePoint> out(grid.size() * theorems.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.size(); i = next++) {
      AsymptoticParams q = kp;
      q.tp = grid[i / theorems.size()];
      const TheoremId id = theorems[i % theorems.size()];
      try {
        out[i] = lambda_of(id, q, opt);
      } catch (const BoundsError& e) {
        out[i] = detail::fail_point(id, q.tp, e.code(), e.what());
      }
    }
  };
  const int jobs = std::max(1, opt.jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace indep_bounds
