#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "indep_bounds/asymptotics.hpp"
#include "indep_bounds/lower_bounds.hpp"

using namespace indep_bounds;

namespace {

const AsymptoticParams kTable1{0.005, 0.5, 0.495, 0.0};
const AsymptoticParams kFig1{0.01, 0.5, 0.49, 0.0};
const AsymptoticParams kFig2{0.25, 0.5, 0.25, 0.0};

AsymptoticParams at(AsymptoticParams kp, double tp) {
  kp.tp = tp;
  return kp;
}

double lam(TheoremId id, const AsymptoticParams& kp) { return lambda_of(id, kp).lambda; }

}  // namespace

TEST(LambdaVertex, Examples) {
  EXPECT_NEAR(lambda_vertex({1.0 / 3, 1.0 / 3, 1.0 / 3, 0}), 3.0, 1e-12);
  EXPECT_NEAR(lambda_vertex({0, 0.5, 0.5, 0}), 2.0, 1e-12);
  EXPECT_NEAR(lambda_vertex({0.25, 0.5, 0.25, 0}), std::exp2(1.5), 1e-12);
  EXPECT_THROW(lambda_vertex({0.5, 0.5, 0.5, 0}), BoundsError);
}

TEST(SumMaxTerm, BinomialPeak) {
  for (double q : {0.1, 0.3, 0.5, 0.8}) {
    SumRegion region;
    region.box = {{0.0, q}};
    const auto m = lambda_sum_max_term([](const std::vector<double>& x) { return binary_entropy(x[0]); },
                                       region);
    EXPECT_NEAR(m.exponent, binary_entropy(std::min(q, 0.5)), 1e-9) << q;
    EXPECT_NEAR(m.argmax[0], std::min(q, 0.5), 1e-4) << q;
  }
}

TEST(SumMaxTerm, EmptyRegion) {
  SumRegion region;
  region.box = {{0.0, 1.0}};
  region.feasible = [](const std::vector<double>&) { return false; };
  try {
    lambda_sum_max_term([](const std::vector<double>&) { return 0.0; }, region);
    FAIL();
  } catch (const BoundsError& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyRegion);
  }
}

TEST(SumMaxTerm, PolynomialSpaceMatchesClosedForm) {
  EXPECT_EQ(detail::polynomial_space_exponent(0.0).exponent, 0.0);
  for (double q : {0.05, 0.2, 0.45, 0.7, 0.95, 1.3})
    EXPECT_NEAR(detail::polynomial_space_exponent(q).exponent,
                detail::polynomial_space_exponent_closed(q), 1e-7)
        << q;
}

TEST(T5, DExponentMatchesFiniteCount) {
  const int n = 999;
  const auto p = lambda_lower(TheoremId::T5, {1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3});
  double d = -1;
  for (const auto& [k, v] : p.aux)
    if (k == "d_exponent") d = v;
  const double finite =
      static_cast<double>(std::log2(vg_dominated_count<long double>({n, n / 3, n / 3, n / 3, n / 3}))) / n;
  EXPECT_NEAR(d, finite, 0.02);
}

TEST(T5, TopOfRangeGivesVertexCount) {
  const auto kp = at(kFig2, 0.5);
  EXPECT_NEAR(lam(TheoremId::T5, kp), lambda_vertex(kp), 1e-6);
  EXPECT_NEAR(lam(TheoremId::T5, at(kFig2, 0.4999)), lambda_vertex(kp), 0.02);
}

TEST(T5, BelowTheMeanDotGivesOne) {
  // every pair reaches t', so d is all of V
  EXPECT_NEAR(lam(TheoremId::T5, at(kFig1, 0.1)), 1.0, 1e-9);
}

TEST(T8, ClosedForm) {
  const double expect = std::exp2(0.5 * binary_entropy(0.5) + 0.5 * binary_entropy(0.99));
  for (double tp : {0.37, 0.38, 0.385}) EXPECT_NEAR(lam(TheoremId::T8, at(kTable1, tp)), expect, 1e-9);
  EXPECT_NEAR(expect, 1.45437, 5e-6);
}

TEST(T4, Table1) {
  EXPECT_GE(lam(TheoremId::T4, at(kTable1, 0.37)), 1.47408 - 0.001);
  EXPECT_NEAR(lam(TheoremId::T4, at(kTable1, 0.37)), 1.47408, 0.001);
}

// At t' = k'_{-1} + k'_1 only single-sign blocks qualify: one vector.
TEST(T4, TopOfRangeIsOne) {
  const auto p = lambda_lower(TheoremId::T4, at(kFig1, 0.5));
  ASSERT_TRUE(p.feasible);
  EXPECT_NEAR(p.lambda, 1.0, 1e-6);
}

TEST(T6, Table1) { EXPECT_GE(lam(TheoremId::T6, at(kTable1, 0.376)), 1.45698 - 0.001); }

TEST(T6, DominatesT4) {
  for (const auto& kp : {kTable1, kFig1})
    for (double tp : {0.3, 0.37, 0.42}) {
      const auto t6 = lambda_lower(TheoremId::T6, at(kp, tp));
      const auto t4 = lambda_lower(TheoremId::T4, at(kp, tp));
      ASSERT_TRUE(t4.feasible);
      ASSERT_TRUE(t6.feasible);
      EXPECT_GE(t6.lambda, t4.lambda - 1e-9) << tp;
    }
}

// With k'_{-1} = 0 the identity table has no cross slack, so the glue
// degenerates to the greedy family itself.
TEST(T6, DominatesT5WithoutMinusOnes) {
  for (const AsymptoticParams kp : {AsymptoticParams{0, 0.5, 0.5, 0}, AsymptoticParams{0, 0.7, 0.3, 0}})
    for (double f : {0.3, 0.6, 0.9}) {
      const double tp = f * kp.kp_1;
      EXPECT_GE(lam(TheoremId::T6, at(kp, tp)), lam(TheoremId::T5, at(kp, tp)) - 1e-9) << tp;
    }
}

TEST(T7, SuperglueRExponentIsBelowProduct) {
  const auto p = lambda_lower(TheoremId::T7, at(kTable1, 0.379), SearchOptions{1, 1, 2, 1});
  ASSERT_TRUE(p.feasible);
  EXPECT_GE(p.lambda, 1.45644 - 0.002);
  EXPECT_LE(p.lambda, lambda_vertex(kTable1));
}

TEST(T1, CappedAtVertexCountOnTheLeft) {
  const auto p = lambda_upper(TheoremId::T1, at(kFig1, 0.05));
  ASSERT_TRUE(p.feasible);
  EXPECT_NEAR(p.lambda, lambda_vertex(kFig1), 1e-12);
  EXPECT_LT(lam(TheoremId::T1, at(kFig1, 0.23)), lambda_vertex(kFig1));
}

TEST(T1, RawSumTendsToOneAsQVanishes) {
  EXPECT_EQ(detail::polynomial_space_exponent(0.0).exponent, 0.0);
  EXPECT_LT(detail::polynomial_space_exponent(1e-4).exponent, 0.005);
}

TEST(T1T3, SingleHandOff) {
  // T1 needs K' - 2q' < -2k'_{-1}; T3 the reverse: they meet at t' = 0.24
  int switches = 0;
  bool prev_t1 = true;
  for (int i = 0; i <= 50; ++i) {
    const double tp = 0.01 * i;
    const bool t1 = lambda_upper(TheoremId::T1, at(kFig1, tp)).feasible;
    const bool t3 = lambda_upper(TheoremId::T3, at(kFig1, tp)).feasible;
    EXPECT_NE(t1, t3) << tp;
    EXPECT_EQ(t1, tp < 0.24 - 1e-9) << tp;
    if (i > 0 && t1 != prev_t1) ++switches;
    prev_t1 = t1;
  }
  EXPECT_EQ(switches, 1);
}

// At k' = (1/4, 1/2, 1/4) T1 would need q' > 1/2, so T3 covers every t'.
TEST(T3, SymmetricProfileApplicability) {
  for (double tp : {0.0, 0.1, 0.25, 0.4, 0.5}) {
    EXPECT_TRUE(lambda_upper(TheoremId::T3, at(kFig2, tp)).feasible) << tp;
    EXPECT_FALSE(lambda_upper(TheoremId::T1, at(kFig2, tp)).feasible) << tp;
  }
}

TEST(T2, UnmetForSymmetricProfile) {
  for (double tp : {0.26, 0.3, 0.45}) {
    const auto p = lambda_upper(TheoremId::T2, at(kFig2, tp));
    EXPECT_FALSE(p.feasible);
    EXPECT_EQ(p.failure, ErrorCode::ConditionsUnmet);
  }
}

TEST(T2, CaseOneFormula) {
  const auto kp = at(kFig1, 0.2);  // 2(t' - k'_{-1}) = 0.38 < k'_1
  const double q = kp.nonzero() - kp.tp;
  EXPECT_NEAR(lam(TheoremId::T2, kp),
              std::exp2(binary_entropy(0.01) + 0.99 * binary_entropy(std::min(q / 0.99, 0.5))), 1e-12);
}

TEST(Suite, LowerNeverAboveUpper) {
  for (const auto& kp : {kFig1, kFig2})
    for (int i = 1; i < 10; ++i) {
      const double tp = 0.05 * i;
      double lo = 0, hi = 1e9;
      for (auto id : {TheoremId::T4, TheoremId::T5, TheoremId::T6, TheoremId::T8}) {
        const auto p = lambda_lower(id, at(kp, tp));
        if (p.feasible) lo = std::max(lo, p.lambda);
      }
      for (auto id : {TheoremId::T1, TheoremId::T2, TheoremId::T3}) {
        const auto p = lambda_upper(id, at(kp, tp));
        if (p.feasible) hi = std::min(hi, p.lambda);
      }
      EXPECT_LE(lo, hi + 1e-9) << kp.kp_m1 << " " << tp;
      EXPECT_LE(hi, lambda_vertex(kp) + 1e-12);
      EXPECT_GE(lo, 1.0);
    }
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  const std::vector<double> grid{0.2, 0.3, 0.38};
  const std::vector<TheoremId> ids{TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4,
                                   TheoremId::T5, TheoremId::T6, TheoremId::T8};
  SearchOptions one, two;
  two.jobs = 2;
  const auto a = sweep(kFig1, grid, ids, one);
  const auto b = sweep(kFig1, grid, ids, two);
  ASSERT_EQ(a.size(), grid.size() * ids.size());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].theorem, ids[i % ids.size()]);
    EXPECT_EQ(a[i].tp, grid[i / ids.size()]);
    EXPECT_EQ(a[i].feasible, b[i].feasible);
    EXPECT_EQ(std::memcmp(&a[i].lambda, &b[i].lambda, sizeof(double)), 0) << i;
  }
}

TEST(Sweep, ErrorsStayInsideThePoint) {
  const auto pts = sweep(kFig2, {0.3}, {TheoremId::T2});
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_FALSE(pts[0].feasible);
  EXPECT_FALSE(pts[0].reason.empty());
}
