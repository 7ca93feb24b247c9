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

#ifndef RANKBREAK_ESTIMATOR_H_
#define RANKBREAK_ESTIMATOR_H_

// Weighted rank-breaking likelihood and the estimators built on it.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "rankbreak/objective.h"
#include "rankbreak/pl_model.h"
#include "rankbreak/rank_breaking.h"

namespace rankbreak {

// weights[j][a] multiplies every pair of the a-th separator of sample j.
using WeightTable = std::vector<std::vector<double>>;

enum class WeightKind {
  kOptimal,       // 1 / (kappa_j - p_{j,a})
  kUniform,       // 1
  kInverseKappa,  // 1 / kappa_j
  kCustom,
};

struct WeightScheme {
  WeightKind kind = WeightKind::kOptimal;
  WeightTable custom;  // only read for kCustom

  static WeightScheme Optimal() { return {WeightKind::kOptimal, {}}; }
  static WeightScheme Uniform() { return {WeightKind::kUniform, {}}; }
  static WeightScheme InverseKappa() { return {WeightKind::kInverseKappa, {}}; }
  static WeightScheme Custom(WeightTable table) {
    return {WeightKind::kCustom, std::move(table)};
  }
};

struct BrokenSample {
  int kappa = 0;
  std::vector<int> offering;  // sorted
  // One graph per separator, ordered by position; bottoms sorted by index.
  std::vector<RankBreakingGraph> graphs;

  int num_separators() const { return static_cast<int>(graphs.size()); }
};

// Rank-breaking graphs of a collection of partial orders over items [0, d)
// together with their weights. Weights default to the optimal scheme.
class BrokenDataset {
 public:
  BrokenDataset(std::span<const PartialOrder> orders, int num_items);

  int num_items() const { return num_items_; }
  int num_samples() const { return static_cast<int>(samples_.size()); }
  const std::vector<BrokenSample>& samples() const { return samples_; }
  const WeightTable& weights() const { return weights_; }

  // Throws InvalidInputError on shape mismatch or negative weights.
  void SetWeights(WeightTable weights);
  BrokenDataset WithScheme(const WeightScheme& scheme) const;

  // Weighted separator-vs-below pairs, ordered by sample, separator and then
  // loser index.
  std::vector<WeightedPair> Pairs() const;

 private:
  int num_items_;
  std::vector<BrokenSample> samples_;
  WeightTable weights_;
};

WeightTable WeightsFor(const WeightScheme& scheme,
                       const BrokenDataset& dataset);

// The weighted paired log-likelihood, evaluated term by term.
double RbLogLikelihood(const Eigen::VectorXd& theta,
                       const BrokenDataset& dataset);
Eigen::VectorXd RbGradient(const Eigen::VectorXd& theta,
                           const BrokenDataset& dataset);
Eigen::MatrixXd RbHessian(const Eigen::VectorXd& theta,
                          const BrokenDataset& dataset);

// Consistent rank-breaking estimate under the dataset's weights.
FitResult FitRankBreaking(const BrokenDataset& dataset,
                          const FitConfig& config);

// Unweighted paired MLE over every readable relation. Inconsistent in
// general; provided as the common baseline.
FitResult FitFullBreaking(std::span<const PartialOrder> orders, int num_items,
                          const FitConfig& config);
FitResult FitFullBreaking(std::span<const PosetDag> dags, int num_items,
                          const FitConfig& config);

// Exact PL maximum likelihood from revealed top prefixes.
FitResult FitMleTopL(std::span<const TopRanking> data, int num_items,
                     const FitConfig& config);

// l * d / (2 * kappa), rounded down.
int RestrictedSize(int ell, int num_items, int kappa);

// Rank-breaking with unit weights restricted to pairs whose endpoints are both
// among the first `restricted_size` entries of `weakest_first`. The box is
// widened to 2 * config.b. Utilities are reported for the restricted items
// that appear in some kept pair. Throws EstimationInfeasibleError when no
// pair survives the restriction.
FitResult FitRestrictedBottomL(const BrokenDataset& dataset,
                               std::span<const int> weakest_first,
                               int restricted_size, const FitConfig& config);

}  // namespace rankbreak

#endif  // RANKBREAK_ESTIMATOR_H_
