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
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "rankbreak/errors.h"

namespace rankbreak {
namespace {

// Dense reachability over the DAG's nodes. reach[u][v] is true when u is
// preferred to v through some directed path.
struct Reachability {
  std::vector<int> nodes;
  std::vector<std::vector<bool>> reach;
};

Reachability ComputeReachability(const PosetDag& dag) {
  const int n = static_cast<int>(dag.nodes.size());
  std::unordered_map<int, int> local;
  for (int i = 0; i < n; ++i) {
    if (!local.emplace(dag.nodes[i], i).second) {
      throw InvalidInputError("DAG repeats node " +
                              std::to_string(dag.nodes[i]));
    }
  }
  std::vector<std::vector<int>> children(n);
  std::vector<int> indegree(n, 0);
  for (const auto& [from, to] : dag.edges) {
    auto f = local.find(from);
    auto t = local.find(to);
    if (f == local.end() || t == local.end()) {
      throw InvalidInputError("DAG edge references an unknown node");
    }
    if (f->second == t->second) throw InvalidInputError("DAG has a self loop");
    children[f->second].push_back(t->second);
    ++indegree[t->second];
  }

  std::vector<int> topo;
  std::queue<int> ready;
  for (int i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  while (!ready.empty()) {
    const int u = ready.front();
    ready.pop();
    topo.push_back(u);
    for (int v : children[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  if (static_cast<int>(topo.size()) != n) {
    throw InvalidInputError("preference graph contains a cycle");
  }

  Reachability out{dag.nodes, std::vector<std::vector<bool>>(
                                  n, std::vector<bool>(n, false))};
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int u = *it;
    for (int v : children[u]) {
      out.reach[u][v] = true;
      for (int w = 0; w < n; ++w) {
        if (out.reach[v][w]) out.reach[u][w] = true;
      }
    }
  }
  return out;
}

void CheckPositions(std::span<const int> positions, int kappa) {
  if (positions.empty()) {
    throw InvalidInputError("a partial order needs at least one separator");
  }
  for (std::size_t a = 0; a < positions.size(); ++a) {
    if (positions[a] < 1 || positions[a] > kappa - 1) {
      throw InvalidInputError("separator position " +
                              std::to_string(positions[a]) +
                              " outside [1, " + std::to_string(kappa - 1) +
                              "]");
    }
    if (a > 0 && positions[a] <= positions[a - 1]) {
      throw InvalidInputError("separator positions must strictly increase");
    }
  }
}

std::vector<std::size_t> ExpectedBlockSizes(std::span<const int> positions,
                                            int kappa) {
  std::vector<std::size_t> sizes;
  int previous = 0;
  for (int p : positions) {
    sizes.push_back(static_cast<std::size_t>(p - previous - 1));
    sizes.push_back(1);
    previous = p;
  }
  sizes.push_back(static_cast<std::size_t>(kappa - previous));
  return sizes;
}

}  // namespace

std::vector<Separator> SeparatorsFromDag(const PosetDag& dag) {
  const Reachability r = ComputeReachability(dag);
  const int n = static_cast<int>(r.nodes.size());
  std::vector<Separator> separators;
  for (int v = 0; v < n; ++v) {
    int above = 0;
    int below = 0;
    for (int u = 0; u < n; ++u) {
      if (r.reach[u][v]) ++above;
      if (r.reach[v][u]) ++below;
    }
    if (below > 0 && above + below == n - 1) {
      separators.push_back({r.nodes[v], above + 1});
    }
  }
  std::sort(separators.begin(), separators.end(),
            [](const Separator& x, const Separator& y) {
              return x.position < y.position;
            });
  return separators;
}

PartialOrder::PartialOrder(Offering offering, std::vector<int> positions,
                           std::vector<std::vector<int>> blocks)
    : offering_(std::move(offering)),
      positions_(std::move(positions)),
      blocks_(std::move(blocks)) {
  const int kappa = offering_.kappa();
  CheckPositions(positions_, kappa);
  const std::vector<std::size_t> sizes = ExpectedBlockSizes(positions_, kappa);
  if (blocks_.size() != sizes.size()) {
    throw InvalidInputError("expected " + std::to_string(sizes.size()) +
                            " blocks for " +
                            std::to_string(positions_.size()) +
                            " separators, got " +
                            std::to_string(blocks_.size()));
  }
  const std::unordered_set<int> members(offering_.items().begin(),
                                        offering_.items().end());
  std::unordered_set<int> seen;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].size() != sizes[k]) {
      throw InvalidInputError("block " + std::to_string(k) + " has size " +
                              std::to_string(blocks_[k].size()) +
                              ", separator positions require " +
                              std::to_string(sizes[k]));
    }
    for (int item : blocks_[k]) {
      if (!members.contains(item)) {
        throw InvalidInputError("block item " + std::to_string(item) +
                                " is not in the offering");
      }
      if (!seen.insert(item).second) {
        throw InvalidInputError("item " + std::to_string(item) +
                                " appears in two blocks");
      }
    }
    if (k % 2 == 0) std::sort(blocks_[k].begin(), blocks_[k].end());
  }
}

std::vector<int> PartialOrder::BelowSeparator(int a) const {
  std::vector<int> below;
  for (std::size_t k = 2 * a + 2; k < blocks_.size(); ++k) {
    below.insert(below.end(), blocks_[k].begin(), blocks_[k].end());
  }
  return below;
}

bool PartialOrder::operator==(const PartialOrder& other) const {
  std::vector<int> mine = offering_.items();
  std::vector<int> theirs = other.offering_.items();
  std::sort(mine.begin(), mine.end());
  std::sort(theirs.begin(), theirs.end());
  return mine == theirs && positions_ == other.positions_ &&
         blocks_ == other.blocks_;
}

PartialOrder PartialOrderFromRanking(const Ranking& ranking,
                                     std::span<const int> positions) {
  const int kappa = ranking.kappa();
  CheckPositions(positions, kappa);
  const std::vector<int>& order = ranking.order();
  std::vector<std::vector<int>> blocks;
  int previous = 0;
  for (int p : positions) {
    blocks.emplace_back(order.begin() + previous, order.begin() + p - 1);
    blocks.push_back({order[p - 1]});
    previous = p;
  }
  blocks.emplace_back(order.begin() + previous, order.end());
  return PartialOrder(ranking.offering(),
                      std::vector<int>(positions.begin(), positions.end()),
                      std::move(blocks));
}

DagConversion PartialOrderFromDag(const PosetDag& dag) {
  const std::vector<Separator> separators = SeparatorsFromDag(dag);
  if (separators.empty()) {
    throw InvalidInputError(
        "no node of the DAG separates the others into a top and a nonempty "
        "bottom set; the poset has no separator-based breaking");
  }
  const Reachability r = ComputeReachability(dag);
  const int n = static_cast<int>(r.nodes.size());
  std::unordered_map<int, int> local;
  for (int i = 0; i < n; ++i) local.emplace(r.nodes[i], i);

  std::vector<int> positions;
  std::unordered_set<int> separator_items;
  std::vector<std::vector<int>> blocks(2 * separators.size() + 1);
  for (std::size_t a = 0; a < separators.size(); ++a) {
    positions.push_back(separators[a].position);
    separator_items.insert(separators[a].item);
    blocks[2 * a + 1] = {separators[a].item};
  }
  // A non-separator item sits in the gap after the separators above it.
  std::vector<int> gap_of(n, -1);
  for (int v = 0; v < n; ++v) {
    if (separator_items.contains(r.nodes[v])) continue;
    int gap = 0;
    for (const Separator& s : separators) {
      if (r.reach[local.at(s.item)][v]) ++gap;
    }
    gap_of[v] = gap;
    blocks[2 * gap].push_back(r.nodes[v]);
  }
  std::vector<std::pair<int, int>> discarded;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (gap_of[u] >= 0 && gap_of[u] == gap_of[v] && r.reach[u][v]) {
        discarded.emplace_back(r.nodes[u], r.nodes[v]);
      }
    }
  }
  return {PartialOrder(Offering(dag.nodes), std::move(positions),
                       std::move(blocks)),
          std::move(discarded)};
}

std::vector<RankBreakingGraph> BreakIntoGraphs(const PartialOrder& order) {
  std::vector<RankBreakingGraph> graphs;
  graphs.reserve(order.num_separators());
  for (int a = 0; a < order.num_separators(); ++a) {
    graphs.push_back(
        {order.separator(a), order.positions()[a], order.BelowSeparator(a)});
  }
  return graphs;
}

std::vector<PairOutcome> ConsistentPairs(const PartialOrder& order) {
  std::vector<PairOutcome> pairs;
  for (int a = 0; a < order.num_separators(); ++a) {
    const int winner = order.separator(a);
    for (int loser : order.BelowSeparator(a)) pairs.push_back({winner, loser});
  }
  return pairs;
}

std::vector<PairOutcome> FullBreakingPairs(const PartialOrder& order) {
  const auto& blocks = order.blocks();
  std::vector<PairOutcome> pairs;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (int winner : blocks[k]) {
      for (std::size_t m = k + 1; m < blocks.size(); ++m) {
        for (int loser : blocks[m]) pairs.push_back({winner, loser});
      }
    }
  }
  return pairs;
}

std::vector<PairOutcome> FullBreakingPairs(const PosetDag& dag) {
  const Reachability r = ComputeReachability(dag);
  const int n = static_cast<int>(r.nodes.size());
  std::vector<PairOutcome> pairs;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (r.reach[u][v]) pairs.push_back({r.nodes[u], r.nodes[v]});
    }
  }
  return pairs;
}

bool IsConsistentBreaking(std::span<const PairOutcome> pairs,
                          const PartialOrder& order) {
  std::unordered_map<int, int> separator_index;
  for (int a = 0; a < order.num_separators(); ++a) {
    separator_index.emplace(order.separator(a), a);
  }
  // block_of[item] = index of the block holding the item.
  std::unordered_map<int, std::size_t> block_of;
  for (std::size_t k = 0; k < order.blocks().size(); ++k) {
    for (int item : order.blocks()[k]) block_of.emplace(item, k);
  }
  for (const PairOutcome& pair : pairs) {
    auto s = separator_index.find(pair.winner);
    auto l = block_of.find(pair.loser);
    if (s == separator_index.end() || l == block_of.end()) return false;
    if (l->second <= static_cast<std::size_t>(2 * s->second + 1)) return false;
  }
  return true;
}

bool IsConsistentBreaking(std::span<const RankBreakingGraph> graphs,
                          const PartialOrder& order) {
  std::vector<PairOutcome> pairs;
  for (const RankBreakingGraph& g : graphs) {
    for (int loser : g.bottom) pairs.push_back({g.separator, loser});
  }
  return IsConsistentBreaking(pairs, order);
}

bool IsTopPrefix(const PartialOrder& order) {
  const auto& positions = order.positions();
  for (std::size_t a = 0; a < positions.size(); ++a) {
    if (positions[a] != static_cast<int>(a) + 1) return false;
  }
  return true;
}

TopRanking ToTopRanking(const PartialOrder& order) {
  if (!IsTopPrefix(order)) {
    throw InvalidInputError(
        "exact PL likelihood needs separators at positions 1..l");
  }
  std::vector<int> items;
  for (const auto& block : order.blocks()) {
    items.insert(items.end(), block.begin(), block.end());
  }
  return {Ranking(std::move(items)), order.num_separators()};
}

}  // namespace rankbreak
