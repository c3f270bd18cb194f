#include <gtest/gtest.h>

#include <random>

#include "indep_bounds/oracle.hpp"
#include "indep_bounds/parameters.hpp"

using namespace indep_bounds;

TEST(Validate, Profiles) {
  EXPECT_NO_THROW(validate_finite({3, 1, 1, 1, 1}));
  try {
    validate_finite({3, 2, 2, 2, 1});
    FAIL();
  } catch (const BoundsError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidProfile);
  }
  EXPECT_THROW(validate_finite({1, -1, 1, 1, 0}), BoundsError);
}

TEST(Validate, CanonicalSwap) {
  const auto c = canonical_form(FiniteParams{4, 3, 0, 1, 0});
  EXPECT_TRUE(c.negated);
  EXPECT_EQ(c.params, (FiniteParams{4, 1, 0, 3, 0}));
  EXPECT_FALSE(canonical_form(FiniteParams{4, 1, 0, 3, 0}).negated);
}

TEST(Mdp, Examples) {
  EXPECT_EQ(mdp(1, 1, 1), -2);
  EXPECT_EQ(mdp(0, 1, 2), 1);
  EXPECT_EQ(mdp(2, 0, 2), -4);
  EXPECT_EQ(mdp(0, 5, 2), 0);
  EXPECT_EQ(mdp(1, 0, 2), -1);
}

TEST(Mdp, MatchesBruteForce) {
  for (int n = 1; n <= 10; ++n)
    for (int a = 0; a <= n; ++a)
      for (int c = 0; a + c <= n; ++c) {
        const int b = n - a - c;
        EXPECT_EQ(mdp(a, b, c), brute_mdp(a, b, c)) << a << "," << b << "," << c;
      }
}

TEST(Mdp, SymmetryAndLowerEnvelope) {
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; b <= 12; ++b)
      for (int c = 0; c <= 12; ++c) {
        EXPECT_EQ(mdp(a, b, c), mdp(c, b, a));
        EXPECT_GE(mdp(a, b, c), -2 * std::min(a, c));
        EXPECT_EQ(mdp(a, b, c) == -2 * std::min(a, c), b >= std::abs(c - a));
      }
}

TEST(Mdp, FractionalAgreesWithScaled) {
  EXPECT_DOUBLE_EQ(mdp(0.1, 0.2, 0.7), 0.7 - 0.3 - 0.2);
  EXPECT_DOUBLE_EQ(mdp(0.25, 0.5, 0.25), -0.5);
}

namespace {
PartitionTable worked_table() {
  // block -1: (1,1,0), block 0: empty, block 1: (0,1,1)
  return table_from_columns({{{1, 1, 0}, {0, 0, 0}, {0, 1, 1}}});
}
}  // namespace

TEST(Table, ValidExamples) {
  const FiniteParams p{4, 1, 2, 1, 0};
  EXPECT_NO_THROW(validate_table(worked_table(), p));
  EXPECT_NO_THROW(validate_table(single_block_table(p), p));
  EXPECT_EQ(table_mdp_sum(worked_table()), 0);
}

TEST(Table, DecrementedCellIsInvalid) {
  const FiniteParams p{4, 1, 2, 1, 0};
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      auto t = worked_table();
      t.cell(a, b) -= 1;
      try {
        validate_table(t, p);
        ADD_FAILURE() << a << "," << b;
      } catch (const BoundsError& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidTable);
      }
    }
}

TEST(Table, FuzzPerturbation) {
  std::mt19937 rng(7);
  const FiniteParams p{9, 2, 3, 4, 0};
  for (int it = 0; it < 500; ++it) {
    // random valid table: scatter each row over the columns
    PartitionTable t;
    for (int a = -1; a <= 1; ++a)
      for (int i = 0; i < p.k(a); ++i) t.cell(a, static_cast<int>(rng() % 3) - 1) += 1;
    t.sync_blocks();
    EXPECT_NO_THROW(validate_table(t, p));
    auto bad = t;
    const int a = static_cast<int>(rng() % 3) - 1, b = static_cast<int>(rng() % 3) - 1;
    bad.cell(a, b) += 1;
    bad.block(b) += 1;  // column sums still consistent, row sum is not
    EXPECT_THROW(validate_table(bad, p), BoundsError);
  }
}

TEST(Table, MdpSumExamples) {
  EXPECT_EQ(table_mdp_sum(single_block_table({3, 1, 1, 1, 0})), -2);
  EXPECT_EQ(table_mdp_sum(table_from_columns({{{0, 0, 4}, {0, 2, 0}, {0, 0, 0}}})), 4);
  EXPECT_EQ(table_mdp_sum(PartitionTable{}), 0);
}

TEST(Table, NegationPreservesMdpSum) {
  const auto t = table_from_columns({{{1, 2, 0}, {0, 1, 3}, {2, 0, 1}}});
  EXPECT_EQ(table_mdp_sum(t), table_mdp_sum(t.negated()));
  EXPECT_EQ(t.negated().negated(), t);
}
