#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "delextra/conll.hpp"
#include "delextra/decode.hpp"
#include "oracles.hpp"

using namespace delextra;

TEST(Oracle, ArborescenceCounts) {
  // Cayley: (n+1)^(n-1) rooted trees on n tokens plus the root.
  EXPECT_EQ(oracle::all_trees(1).size(), 1u);
  EXPECT_EQ(oracle::all_trees(2).size(), 3u);
  EXPECT_EQ(oracle::all_trees(3).size(), 16u);
  EXPECT_EQ(oracle::all_trees(4).size(), 125u);
}

TEST(Decode, SingleToken) {
  EdgeScores es(1);
  es(0, 1) = -3.0;
  EXPECT_EQ(decode(es).heads, (std::vector<int>{0}));
}

TEST(Decode, TwoTokenExample) {
  EdgeScores es(2);
  es(0, 1) = 5;
  es(0, 2) = 1;
  es(1, 2) = 3;
  es(2, 1) = 0;
  const auto t = decode(es);
  EXPECT_EQ(t.heads, (std::vector<int>{0, 1}));
  EXPECT_EQ(tree_score(es, t), 8.0);
}

TEST(Decode, ThreeCycleMatchesBruteForce) {
  EdgeScores es(3);
  for (int h = 0; h <= 3; ++h)
    for (int d = 1; d <= 3; ++d)
      if (h != d) es(h, d) = 1.0;
  es(1, 2) = 10;
  es(2, 3) = 10;
  es(3, 1) = 10;
  es(0, 2) = 4;
  const auto t = decode(es);
  EXPECT_TRUE(validate_heads(t.heads));
  EXPECT_EQ(tree_score(es, t), oracle::best_tree_score(es));
  EXPECT_EQ(t.heads, (std::vector<int>{3, 0, 2}));
}

TEST(Decode, EmptyThrows) { EXPECT_THROW(decode(EdgeScores(0)), std::invalid_argument); }

TEST(Decode, MatchesBruteForceOnRandomReals) {
  std::mt19937 rng(2024);
  for (int n = 1; n <= 5; ++n)
    for (int trial = 0; trial < 200; ++trial) {
      const auto es = oracle::random_scores(n, rng, false);
      const auto t = decode(es);
      ASSERT_TRUE(validate_heads(t.heads));
      ASSERT_EQ(tree_score(es, t), oracle::best_tree_score(es)) << "n=" << n;
    }
}

TEST(Decode, MatchesBruteForceWithTies) {
  std::mt19937 rng(99);
  for (int n = 1; n <= 4; ++n)
    for (int trial = 0; trial < 300; ++trial) {
      const auto es = oracle::random_scores(n, rng, true);
      const auto t = decode(es);
      ASSERT_TRUE(validate_heads(t.heads));
      ASSERT_EQ(tree_score(es, t), oracle::best_tree_score(es));
    }
}

TEST(Decode, TiesPreferLowerHead) {
  EdgeScores es(3);  // all zeros: every token should go to the root
  EXPECT_EQ(decode(es).heads, (std::vector<int>{0, 0, 0}));
  es(2, 1) = 1;
  es(3, 1) = 1;
  EXPECT_EQ(decode(es).heads, (std::vector<int>{2, 0, 0}));
}

TEST(Decode, ShiftInvariant) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    auto es = oracle::random_scores(n, rng, true);
    const auto before = decode(es);
    const double c = static_cast<double>(static_cast<int>(rng() % 21) - 10);
    for (int h = 0; h <= n; ++h)
      for (int d = 1; d <= n; ++d)
        if (h != d) es(h, d) += c;
    ASSERT_EQ(decode(es), before);
  }
}

TEST(Decode, Deterministic) {
  std::mt19937 rng(11);
  const auto es = oracle::random_scores(12, rng, true);
  const auto first = decode(es);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(decode(es), first);
  EXPECT_TRUE(validate_heads(first.heads));
}

TEST(Decode, LargerSentencesStayValid) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 40);
    const auto es = oracle::random_scores(n, rng, trial % 2 == 0);
    ASSERT_TRUE(validate_heads(decode(es).heads));
  }
}
