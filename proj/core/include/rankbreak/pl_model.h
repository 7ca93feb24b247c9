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

#ifndef RANKBREAK_PL_MODEL_H_
#define RANKBREAK_PL_MODEL_H_

// Plackett-Luce parameter space, ranking sampler and exact likelihoods.
//
// Items are referred to by dense integer indices in [0, d). The mapping from
// external string identifiers lives in ItemIndex and travels with datasets.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace rankbreak {

// Bidirectional map between opaque item identifiers and dense indices.
class ItemIndex {
 public:
  ItemIndex() = default;

  // Returns the dense index of `id`, inserting it if unseen.
  int Intern(std::string_view id);
  // Returns -1 when `id` is unknown.
  int Find(std::string_view id) const;
  const std::string& Name(int index) const { return names_.at(index); }
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  // Index where item i is named by its decimal index.
  static ItemIndex Numeric(int num_items);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> lookup_;
};

// A point of the centered, box-bounded parameter set: the values sum to zero
// and every |value| <= b.
class UtilityVector {
 public:
  static constexpr double kSumTolerance = 1e-9;
  static constexpr double kBoxTolerance = 1e-12;

  // Validates both invariants; throws InvalidInputError otherwise.
  UtilityVector(Eigen::VectorXd values, double b);

  const Eigen::VectorXd& values() const { return values_; }
  double b() const { return b_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }

 private:
  Eigen::VectorXd values_;
  double b_;
};

// Euclidean projection of `raw` onto {sum = 0, |x_i| <= b}: clamp(raw + c)
// with the scalar shift c solved so the sum vanishes. Plain alternating
// centering and clamping also lands in the set but not always on the nearest
// point.
UtilityVector ProjectFeasible(const Eigen::VectorXd& raw, double b);

// Offered set of distinct items, size >= 2.
class Offering {
 public:
  explicit Offering(std::vector<int> items);

  const std::vector<int>& items() const { return items_; }
  int kappa() const { return static_cast<int>(items_.size()); }

 private:
  std::vector<int> items_;
};

// Total order over an offering; order()[0] is the most preferred item.
class Ranking {
 public:
  explicit Ranking(std::vector<int> order);

  const std::vector<int>& order() const { return order_; }
  int kappa() const { return static_cast<int>(order_.size()); }
  int at(int position) const { return order_[position - 1]; }  // 1-based
  Offering offering() const { return Offering(order_); }

 private:
  std::vector<int> order_;
};

// A ranking of which only the first `top` positions are revealed; the items
// after them form an unordered remainder.
struct TopRanking {
  Ranking ranking;
  int top = 1;
};

// Numerically stable log(sum(exp(x))) over the given entries of theta.
double LogSumExp(const Eigen::VectorXd& theta, std::span<const int> items);

// log P(ranking) under sequential choice from the top.
double PlRankingLogProbability(const UtilityVector& theta,
                               const Ranking& ranking);
double PlRankingProbability(const UtilityVector& theta, const Ranking& ranking);

// Draws a ranking by sorting independent exponential clocks with rates
// exp(theta_i); the earliest clock is ranked first.
Ranking SampleRanking(const UtilityVector& theta, const Offering& offering,
                      std::mt19937_64& rng);
Ranking SampleRanking(const UtilityVector& theta, const Offering& offering,
                      std::uint64_t seed);

// Sum over samples of the exact PL log-likelihood of the revealed prefix.
double PlTopLogLikelihood(const UtilityVector& theta,
                          std::span<const TopRanking> data);

}  // namespace rankbreak

#endif  // RANKBREAK_PL_MODEL_H_
