#include <gtest/gtest.h>

#include "indep_bounds/verify.hpp"

using namespace indep_bounds;

TEST(Verify, EmptyForZero) {
  VerifyOptions opt;
  opt.max_n = 0;
  const auto r = verify_all(opt);
  EXPECT_TRUE(r.tuples.empty());
  EXPECT_TRUE(r.ok());
}

TEST(Verify, SmallFamilyPasses) {
  VerifyOptions opt;
  opt.max_n = 5;
  opt.jobs = 2;
  const auto r = verify_all(opt);
  for (const auto& t : r.tuples)
    for (const auto& f : t.failures()) ADD_FAILURE() << to_string(t.params) << ": " << f;
  for (const auto& f : r.profile_failures) ADD_FAILURE() << f;
  bool seen = false;
  for (const auto& t : r.tuples)
    if (t.params == FiniteParams{3, 1, 1, 1, 1}) {
      seen = true;
      EXPECT_EQ(t.alpha, 3);
    }
  EXPECT_TRUE(seen);
}

TEST(Verify, WorkedUpperBound) {
  const auto r = verify_tuple({4, 0, 2, 2, 0});
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.alpha, 3);
  bool t1 = false;
  for (const auto& b : r.bounds)
    if (b.theorem == TheoremId::T1) {
      t1 = true;
      EXPECT_EQ(b.value, 5);
    }
  EXPECT_TRUE(t1);
}

// Without the budget for an exact answer the bounds are still settled.
TEST(Verify, DecidedWithoutExactAlpha) {
  VerifyOptions opt;
  opt.node_budget = 2000;
  const auto r = verify_tuple({7, 3, 2, 2, -3}, opt);
  EXPECT_FALSE(r.alpha.has_value());
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.bounds.empty());
}
