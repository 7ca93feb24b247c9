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

#ifndef RANKBREAK_RANK_BREAKING_H_
#define RANKBREAK_RANK_BREAKING_H_

// Partial orders with fixed separator positions and their consistent
// rank-breaking into separator-vs-below pairwise outcomes.

#include <span>
#include <utility>
#include <vector>

#include "rankbreak/pl_model.h"

namespace rankbreak {

// Hasse diagram of a poset; each edge points from the preferred item to the
// less preferred one.
struct PosetDag {
  std::vector<int> nodes;
  std::vector<std::pair<int, int>> edges;
};

struct Separator {
  int item = 0;
  int position = 0;  // 1-based rank of the separator
};

// Nodes comparable to every other node and with at least one node below.
// Sorted by position. Throws InvalidInputError on cycles or dangling edges.
std::vector<Separator> SeparatorsFromDag(const PosetDag& dag);

// One agent's observation over an offering of kappa items with separators at
// positions p_1 < ... < p_l in [1, kappa-1].
//
// blocks() holds 2l+1 groups laid out as
//   gap_0, sep_1, gap_1, sep_2, ..., sep_l, gap_l
// with |gap_0| = p_1 - 1, |gap_a| = p_{a+1} - p_a - 1, |gap_l| = kappa - p_l
// and every sep_a a single item. Gap items carry no internal order and are
// stored sorted by index.
class PartialOrder {
 public:
  PartialOrder(Offering offering, std::vector<int> positions,
               std::vector<std::vector<int>> blocks);

  const Offering& offering() const { return offering_; }
  const std::vector<int>& positions() const { return positions_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int kappa() const { return offering_.kappa(); }
  int num_separators() const { return static_cast<int>(positions_.size()); }
  // a is 0-based.
  int separator(int a) const { return blocks_[2 * a + 1].front(); }
  // Items ranked strictly below the a-th separator.
  std::vector<int> BelowSeparator(int a) const;

  bool operator==(const PartialOrder& other) const;

 private:
  Offering offering_;
  std::vector<int> positions_;
  std::vector<std::vector<int>> blocks_;
};

// Cuts a total order at the given 1-based positions.
PartialOrder PartialOrderFromRanking(const Ranking& ranking,
                                     std::span<const int> positions);

struct DagConversion {
  PartialOrder order;
  // Relations implied by the DAG between two items that land in the same
  // unordered gap; the separator form cannot represent them.
  std::vector<std::pair<int, int>> discarded_relations;
};

// Keeps the separator skeleton of a Hasse diagram. Throws InvalidInputError
// when the DAG has no separator.
DagConversion PartialOrderFromDag(const PosetDag& dag);

struct RankBreakingGraph {
  int separator = 0;
  int position = 0;
  std::vector<int> bottom;  // every item ranked below the separator
};

std::vector<RankBreakingGraph> BreakIntoGraphs(const PartialOrder& order);

struct PairOutcome {
  int winner = 0;
  int loser = 0;
  bool operator==(const PairOutcome&) const = default;
};

// Flattened edges of BreakIntoGraphs: separator beats each item below it.
std::vector<PairOutcome> ConsistentPairs(const PartialOrder& order);

// Every relation readable from the partial order: each item of an earlier
// block beats each item of a later block.
std::vector<PairOutcome> FullBreakingPairs(const PartialOrder& order);
// Every relation in the transitive closure of the DAG.
std::vector<PairOutcome> FullBreakingPairs(const PosetDag& dag);

// True iff every pair has a separator of `order` as winner and an item ranked
// below that separator as loser.
bool IsConsistentBreaking(std::span<const PairOutcome> pairs,
                          const PartialOrder& order);
bool IsConsistentBreaking(std::span<const RankBreakingGraph> graphs,
                          const PartialOrder& order);

// True when the separators occupy positions 1..l.
bool IsTopPrefix(const PartialOrder& order);
// Throws InvalidInputError unless IsTopPrefix(order).
TopRanking ToTopRanking(const PartialOrder& order);

}  // namespace rankbreak

#endif  // RANKBREAK_RANK_BREAKING_H_
