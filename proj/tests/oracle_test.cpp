#include <gtest/gtest.h>

#include <cstdlib>

#include "indep_bounds/lower_bounds.hpp"
#include "indep_bounds/finite_search.hpp"
#include "indep_bounds/oracle.hpp"
#include "indep_bounds/upper_bounds.hpp"

using namespace indep_bounds;

TEST(Enumerate, Examples) {
  EXPECT_EQ(enumerate_vertices({3, 1, 1, 1, 0}).size(), 6u);
  EXPECT_EQ(enumerate_vertices({4, 0, 2, 2, 0}).size(), 6u);
  const auto v = enumerate_vertices({2, 2, 0, 0, 0});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.members[0], (Vector{-1, -1}));
}

TEST(Enumerate, LexicographicAndDistinct) {
  const auto v = enumerate_vertices({6, 2, 1, 3, 0});
  EXPECT_EQ(BigCount(v.size()), vertex_count(v.params));
  EXPECT_TRUE(std::is_sorted(v.members.begin(), v.members.end()));
  EXPECT_EQ(std::adjacent_find(v.members.begin(), v.members.end()), v.members.end());
}

TEST(Enumerate, CapFromEnvironment) {
  ::setenv("INDEP_BOUNDS_ENUM_CAP", "10", 1);
  EXPECT_THROW(enumerate_vertices({4, 1, 2, 1, 0}), BoundsError);
  ::unsetenv("INDEP_BOUNDS_ENUM_CAP");
  EXPECT_NO_THROW(enumerate_vertices({4, 1, 2, 1, 0}));
}

TEST(Alpha, Examples) {
  EXPECT_EQ(independence_number_exact({3, 1, 1, 1, 1}), 3);
  EXPECT_EQ(independence_number_exact({3, 1, 1, 1, 3}), 6);
  EXPECT_EQ(independence_number_exact({4, 0, 2, 2, 0}), 3);
  EXPECT_THROW(independence_number_exact({9, 3, 3, 3, 0}), BoundsError);
}

TEST(Alpha, SetIsIndependent) {
  const FiniteParams p{6, 1, 3, 2, 0};
  const auto s = maximum_independent_set(p);
  EXPECT_TRUE(verify_independent(s, p.t, PairMode::NotEqual));
}

// Exhaustive subset search on tiny graphs as an independent check of the solver.
TEST(Alpha, MatchesExhaustiveOnTinyGraphs) {
  for (int n = 1; n <= 4; ++n)
    for (int a = 0; a <= n; ++a)
      for (int c = 0; a + c <= n; ++c)
        for (int t = -n; t <= n; ++t) {
          const FiniteParams p{n, a, n - a - c, c, t};
          const auto v = enumerate_vertices(p);
          if (v.size() > 16) continue;
          int best = 0;
          for (unsigned mask = 0; mask < (1u << v.size()); ++mask) {
            VectorSet s{{}, p};
            for (std::size_t i = 0; i < v.size(); ++i)
              if (mask >> i & 1u) s.members.push_back(v.members[i]);
            if (verify_independent(s, t, PairMode::NotEqual))
              best = std::max(best, static_cast<int>(s.size()));
          }
          EXPECT_EQ(independence_number_exact(p), best) << to_string(p);
        }
}

TEST(HExact, Examples) {
  EXPECT_EQ(h_exact({6, 0, 2, 4, 3}), 3);
  EXPECT_EQ(h_exact({3, 1, 1, 1, -2}), 1);
}

TEST(HExact, AtLeastVg) {
  for (int n = 1; n <= 6; ++n)
    for (int a = 0; a <= n; ++a)
      for (int c = 0; a + c <= n; ++c)
        for (int t = mdp(a, n - a - c, c); t <= a + c + 1; ++t) {
          const FiniteParams p{n, a, n - a - c, c, t};
          EXPECT_GE(BigCount(h_exact(p)), *vg_lower_bound(p).value) << to_string(p);
          EXPECT_LE(h_exact(p), independence_number_exact(p));
        }
}

TEST(BruteMdp, Examples) {
  EXPECT_EQ(brute_mdp(1, 1, 1), -2);
  EXPECT_EQ(brute_mdp(0, 1, 2), 1);
  EXPECT_EQ(brute_mdp(1, 0, 2), -1);
  EXPECT_THROW(brute_mdp(4, 4, 3), BoundsError);
}

TEST(BruteD, Examples) {
  EXPECT_EQ(brute_d_count({3, 1, 1, 1, 1}), 3);
  EXPECT_EQ(brute_d_count({3, 1, 1, 1, -2}), 6);
  EXPECT_EQ(brute_d_count({6, 0, 2, 4, 3}), 9);
}

TEST(BuildAk, Examples) {
  const FiniteParams p{3, 0, 1, 2, 0};
  const auto s = build_ak_set(p, single_block_table(p));
  EXPECT_EQ(s.members, (std::vector<Vector>{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  EXPECT_TRUE(verify_independent(s, 0, PairMode::NotEqual));
  const auto one = build_ak_set({6, 0, 2, 4, 3}, table_from_columns({{{0, 0, 4}, {0, 2, 0}, {0, 0, 0}}}));
  EXPECT_EQ(one.size(), 1u);
  auto bad = single_block_table(p);
  bad.cell(1, 1) -= 1;
  EXPECT_THROW(build_ak_set(p, bad), BoundsError);
}

TEST(BuildPairs, Examples) {
  const auto s = build_pairs_set({4, 1, 2, 1, 1});
  EXPECT_EQ(s.size(), 4u);
  EXPECT_TRUE(verify_independent(s, 1, PairMode::NotEqual));
  EXPECT_EQ(build_pairs_set({2, 1, 0, 1, 1}).size(), 2u);
  try {
    build_pairs_set({4, 1, 2, 1, 2});
    FAIL();
  } catch (const BoundsError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConditionsUnmet);
  }
}

TEST(BuildPairs, AllDotsEvenAndSizeMatches) {
  for (int n = 2; n <= 10; n += 2)
    for (int a = 0; a <= n; ++a)
      for (int c = 0; a + c <= n; ++c) {
        if ((a + c) % 2) continue;
        const FiniteParams p{n, a, n - a - c, c, 1};
        const auto s = build_pairs_set(p);
        EXPECT_EQ(BigCount(s.size()), *pairs_lower_bound(p).value);
        for (const auto& x : s.members)
          for (const auto& y : s.members) EXPECT_EQ(dot(x, y) % 2, 0);
      }
}

TEST(Verify, Modes) {
  VectorSet s{{{-1, 0, 1}, {1, 0, -1}}, {3, 1, 1, 1, -2}};
  EXPECT_FALSE(verify_independent(s, -2, PairMode::NotEqual));
  EXPECT_TRUE(verify_independent(s, -1, PairMode::NotEqual));
  EXPECT_FALSE(verify_independent(s, -2, PairMode::Less));
  EXPECT_TRUE(verify_independent(s, -1, PairMode::Less));
}

TEST(Sandwich, WorkedInstances) {
  EXPECT_EQ(independence_number_exact({3, 1, 1, 1, 1}), 3);
  EXPECT_EQ(independence_number_exact({4, 0, 2, 2, 0}), 3);
  EXPECT_EQ(*fw_upper_bound({4, 0, 2, 2, 0}).value, 5);
}

TEST(Decision, SmallGraph) {
  const FiniteParams p{4, 0, 2, 2, 0};
  const auto yes = independent_set_of_size(p, 3);
  ASSERT_EQ(yes.answer, Answer::Yes);
  EXPECT_EQ(yes.witness.size(), 3u);
  EXPECT_TRUE(verify_independent(yes.witness, 0, PairMode::NotEqual));
  EXPECT_EQ(independent_set_of_size(p, 4).answer, Answer::No);
  EXPECT_EQ(independence_number_at_most(p, 3), Answer::Yes);
  EXPECT_EQ(independence_number_at_most(p, 2), Answer::No);
}

// A graph whose exact alpha is out of reach of a small budget.
TEST(Decision, BudgetAndLargeInstance) {
  const FiniteParams p{7, 3, 2, 2, -3};
  EXPECT_FALSE(independence_number_within(p, 1000).has_value());
  const auto q = independent_set_of_size(p, 60);
  ASSERT_EQ(q.answer, Answer::Yes);
  EXPECT_TRUE(verify_independent(q.witness, p.t, PairMode::NotEqual));
  EXPECT_EQ(independence_number_at_most(p, 209), Answer::Yes);
}

TEST(Decision, AgreesWithExact) {
  for (const FiniteParams p : {FiniteParams{5, 1, 2, 2, 0}, FiniteParams{6, 2, 2, 2, -1},
                               FiniteParams{6, 0, 3, 3, 1}}) {
    const auto a = static_cast<std::size_t>(independence_number_exact(p));
    EXPECT_EQ(independent_set_of_size(p, a).answer, Answer::Yes) << to_string(p);
    EXPECT_EQ(independent_set_of_size(p, a + 1).answer, Answer::No) << to_string(p);
    EXPECT_EQ(independence_number_at_most(p, a), Answer::Yes) << to_string(p);
    EXPECT_EQ(independence_number_at_most(p, a - 1), Answer::No) << to_string(p);
  }
}

TEST(BuildVg, BeatsGreedyGuarantee) {
  for (int n = 1; n <= 7; ++n)
    for (int a = 0; a <= n; ++a)
      for (int c = 0; a + c <= n; ++c)
        for (int t = mdp(a, n - a - c, c); t <= a + c + 1; ++t) {
          const FiniteParams p{n, a, n - a - c, c, t};
          const auto s = build_vg_set(p);
          EXPECT_TRUE(verify_independent(s, t, PairMode::Less)) << to_string(p);
          EXPECT_GE(BigCount(s.size()), *vg_lower_bound(p).value) << to_string(p);
        }
}

TEST(BuildGlue, IndependentAndAtLeastBound) {
  int checked = 0;
  for (int n = 4; n <= 8; ++n)
    for (int a = 0; a <= n; ++a)
      for (int c = 0; a + c <= n; ++c)
        for (int t = mdp(a, n - a - c, c); t <= a + c; ++t) {
          const FiniteParams p{n, a, n - a - c, c, t};
          if (vertex_count(p) > 400) continue;
          const auto r = best_finite_bound(TheoremId::T6, p);
          if (!r.conditions_met) continue;
          const auto s = build_glue_set(p, *r.witness.table, *r.witness.t1);
          EXPECT_TRUE(verify_independent(s, t, PairMode::NotEqual)) << to_string(p);
          EXPECT_GE(BigCount(s.size()), *r.value) << to_string(p);
          ++checked;
        }
  EXPECT_GT(checked, 50);
}
