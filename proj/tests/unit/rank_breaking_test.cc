// Copyright 2026 The Rankbreak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rankbreak/rank_breaking.h"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "rankbreak/errors.h"

namespace rankbreak {
namespace {

std::set<std::pair<int, int>> AsSet(const std::vector<PairOutcome>& pairs) {
  std::set<std::pair<int, int>> out;
  for (const auto& p : pairs) out.emplace(p.winner, p.loser);
  return out;
}

PosetDag DiamondDag() {
  // 0 above {1, 2}, both above 3, which is above {4, 5}.
  return {{0, 1, 2, 3, 4, 5},
          {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}}};
}

TEST(PartialOrderTest, FromRankingLayout) {
  const std::vector<int> positions = {2, 4};
  const PartialOrder po =
      PartialOrderFromRanking(Ranking({7, 3, 5, 1, 9, 0}), positions);
  ASSERT_EQ(po.blocks().size(), 5u);
  EXPECT_EQ(po.blocks()[0], std::vector<int>({7}));
  EXPECT_EQ(po.separator(0), 3);
  EXPECT_EQ(po.blocks()[2], std::vector<int>({5}));
  EXPECT_EQ(po.separator(1), 1);
  EXPECT_EQ(po.blocks()[4], std::vector<int>({0, 9}));  // sorted gap
  std::vector<int> below = po.BelowSeparator(0);
  std::sort(below.begin(), below.end());
  EXPECT_EQ(below, std::vector<int>({0, 1, 5, 9}));
  EXPECT_EQ(po.BelowSeparator(1), std::vector<int>({0, 9}));
}

TEST(PartialOrderTest, RejectsBadPositions) {
  const Ranking r({0, 1, 2});
  EXPECT_THROW(PartialOrderFromRanking(r, std::vector<int>{3}),
               InvalidInputError);
  EXPECT_THROW(PartialOrderFromRanking(r, std::vector<int>{0}),
               InvalidInputError);
  EXPECT_THROW(PartialOrderFromRanking(r, std::vector<int>{2, 1}),
               InvalidInputError);
  EXPECT_THROW(PartialOrderFromRanking(r, std::vector<int>{}),
               InvalidInputError);
}

TEST(SeparatorsTest, DiamondDag) {
  const auto seps = SeparatorsFromDag(DiamondDag());
  ASSERT_EQ(seps.size(), 2u);
  EXPECT_EQ(seps[0].item, 0);
  EXPECT_EQ(seps[0].position, 1);
  EXPECT_EQ(seps[1].item, 3);
  EXPECT_EQ(seps[1].position, 4);
}

TEST(SeparatorsTest, RejectsCycle) {
  const PosetDag cyclic = {{0, 1, 2}, {{0, 1}, {1, 2}, {2, 0}}};
  EXPECT_THROW(SeparatorsFromDag(cyclic), InvalidInputError);
}

TEST(DagConversionTest, DiamondKeepsEverything) {
  const DagConversion conv = PartialOrderFromDag(DiamondDag());
  EXPECT_EQ(conv.order.positions(), std::vector<int>({1, 4}));
  EXPECT_TRUE(conv.discarded_relations.empty());
  EXPECT_EQ(conv.order.blocks()[2], std::vector<int>({1, 2}));
}

TEST(DagConversionTest, ReportsRelationsInsideGap) {
  const PosetDag dag = {{0, 1, 2, 3}, {{0, 1}, {0, 2}, {1, 3}}};
  const DagConversion conv = PartialOrderFromDag(dag);
  EXPECT_EQ(conv.order.positions(), std::vector<int>({1}));
  ASSERT_EQ(conv.discarded_relations.size(), 1u);
  EXPECT_EQ(conv.discarded_relations[0], std::make_pair(1, 3));
}

TEST(DagConversionTest, NoSeparatorThrows) {
  const PosetDag dag = {{0, 1, 2}, {{0, 2}}};
  EXPECT_THROW(PartialOrderFromDag(dag), InvalidInputError);
}

TEST(BreakingTest, ConsistentPairsOfDiamond) {
  const PartialOrder po = PartialOrderFromDag(DiamondDag()).order;
  const auto pairs = ConsistentPairs(po);
  EXPECT_EQ(pairs.size(), 5u + 2u);
  EXPECT_TRUE(IsConsistentBreaking(pairs, po));
  const auto graphs = BreakIntoGraphs(po);
  ASSERT_EQ(graphs.size(), 2u);
  EXPECT_EQ(graphs[1].separator, 3);
  EXPECT_EQ(graphs[1].bottom, std::vector<int>({4, 5}));
  EXPECT_TRUE(IsConsistentBreaking(graphs, po));
}

TEST(BreakingTest, FullBreakingCountsAgree) {
  const PartialOrder po = PartialOrderFromDag(DiamondDag()).order;
  // 15 pairs minus {1,2} and {4,5}, which share a block.
  EXPECT_EQ(FullBreakingPairs(po).size(), 13u);
  EXPECT_EQ(AsSet(FullBreakingPairs(DiamondDag())),
            AsSet(FullBreakingPairs(po)));
}

TEST(BreakingTest, FullBreakingIsNotConsistent) {
  const PartialOrder po = PartialOrderFromDag(DiamondDag()).order;
  // 1 beats 3 is implied but 1 is no separator.
  EXPECT_FALSE(IsConsistentBreaking(FullBreakingPairs(po), po));
}

TEST(BreakingTest, ReversedPairIsNotConsistent) {
  const PartialOrder po =
      PartialOrderFromRanking(Ranking({0, 1, 2}), std::vector<int>{1});
  const std::vector<PairOutcome> reversed = {{1, 0}};
  EXPECT_FALSE(IsConsistentBreaking(reversed, po));
}

TEST(BreakingTest, RandomInvariants) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const int kappa = 2 + t % 9;
    std::vector<int> items(kappa);
    for (int i = 0; i < kappa; ++i) items[i] = 3 * i + 1;
    std::shuffle(items.begin(), items.end(), rng);
    std::vector<int> positions;
    for (int p = 1; p < kappa; ++p) {
      if (std::bernoulli_distribution(0.4)(rng)) positions.push_back(p);
    }
    if (positions.empty()) positions.push_back(1);
    const PartialOrder po = PartialOrderFromRanking(Ranking(items), positions);
    // Pair count is the sum of kappa - p over separators.
    std::size_t expected = 0;
    for (int p : positions) expected += static_cast<std::size_t>(kappa - p);
    const auto pairs = ConsistentPairs(po);
    EXPECT_EQ(pairs.size(), expected);
    EXPECT_TRUE(IsConsistentBreaking(pairs, po));
    // Consistent pairs are a subset of the full breaking.
    const auto full = AsSet(FullBreakingPairs(po));
    for (const auto& p : pairs) EXPECT_TRUE(full.count({p.winner, p.loser}));
    // Every pair agrees with the generating order.
    for (const auto& p : pairs) {
      const auto w = std::find(items.begin(), items.end(), p.winner);
      const auto l = std::find(items.begin(), items.end(), p.loser);
      EXPECT_LT(w, l);
    }
  }
}

TEST(TopPrefixTest, Detection) {
  const Ranking r({4, 2, 0, 1});
  const PartialOrder top =
      PartialOrderFromRanking(r, std::vector<int>{1, 2});
  EXPECT_TRUE(IsTopPrefix(top));
  const TopRanking tr = ToTopRanking(top);
  EXPECT_EQ(tr.top, 2);
  EXPECT_EQ(tr.ranking.at(1), 4);
  EXPECT_EQ(tr.ranking.at(2), 2);
  const PartialOrder gappy = PartialOrderFromRanking(r, std::vector<int>{2});
  EXPECT_FALSE(IsTopPrefix(gappy));
  EXPECT_THROW(ToTopRanking(gappy), InvalidInputError);
}

}  // namespace
}  // namespace rankbreak
