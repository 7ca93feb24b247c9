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

#ifndef RANKBREAK_OBJECTIVE_H_
#define RANKBREAK_OBJECTIVE_H_

// Concave log-likelihood objectives and the constrained maximizer shared by
// every estimator.

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rankbreak/pl_model.h"

namespace rankbreak {

// A twice differentiable concave function of utilities over `dimension()`
// items, invariant to adding a constant to every utility.
class ConcaveObjective {
 public:
  virtual ~ConcaveObjective() = default;

  virtual int dimension() const = 0;
  virtual double Value(const Eigen::VectorXd& theta) const = 0;
  virtual Eigen::VectorXd Gradient(const Eigen::VectorXd& theta) const = 0;
  virtual Eigen::MatrixXd Hessian(const Eigen::VectorXd& theta) const = 0;

  // Pairs of items coupled by at least one likelihood term. Items that appear
  // in no pair carry no information.
  virtual std::vector<std::pair<int, int>> InteractionEdges() const = 0;

  // The objective over `items` only (local index k is items[k]); `items` must
  // be a union of connected components.
  virtual std::unique_ptr<ConcaveObjective> Restrict(
      std::span<const int> items) const = 0;

  // One minorization-maximization update, when the objective admits one.
  virtual std::optional<Eigen::VectorXd> MinorizationStep(
      const Eigen::VectorXd& theta) const {
    (void)theta;
    return std::nullopt;
  }
};

struct WeightedPair {
  int winner = 0;
  int loser = 0;
  double weight = 1.0;
};

// sum over pairs of weight * log P(winner beats loser) under the pairwise
// logit model. Pairs sharing endpoints are aggregated at construction so each
// evaluation costs one pass over distinct item pairs.
class PairwiseObjective final : public ConcaveObjective {
 public:
  PairwiseObjective(int num_items, std::span<const WeightedPair> pairs);

  int dimension() const override { return num_items_; }
  double Value(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd Gradient(const Eigen::VectorXd& theta) const override;
  Eigen::MatrixXd Hessian(const Eigen::VectorXd& theta) const override;
  std::vector<std::pair<int, int>> InteractionEdges() const override;
  std::unique_ptr<ConcaveObjective> Restrict(
      std::span<const int> items) const override;
  std::optional<Eigen::VectorXd> MinorizationStep(
      const Eigen::VectorXd& theta) const override;

  int num_distinct_pairs() const { return static_cast<int>(links_.size()); }

 private:
  // i < j; forward = total weight of "i beats j", backward of "j beats i".
  struct Link {
    int i;
    int j;
    double forward;
    double backward;
  };
  PairwiseObjective(int num_items, std::vector<Link> links);

  int num_items_;
  std::vector<Link> links_;
};

// Exact PL log-likelihood of revealed top prefixes.
class PlTopObjective final : public ConcaveObjective {
 public:
  PlTopObjective(int num_items, std::vector<TopRanking> samples);

  int dimension() const override { return num_items_; }
  double Value(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd Gradient(const Eigen::VectorXd& theta) const override;
  Eigen::MatrixXd Hessian(const Eigen::VectorXd& theta) const override;
  std::vector<std::pair<int, int>> InteractionEdges() const override;
  std::unique_ptr<ConcaveObjective> Restrict(
      std::span<const int> items) const override;

 private:
  int num_items_;
  std::vector<TopRanking> samples_;
};

enum class FitMethod {
  kProjectedNewton,
  kProjectedGradient,
  kMinorizationMaximization,
};

struct FitConfig {
  double b = 1.0;
  // Stop once the projected gradient has infinity norm at most this.
  double tolerance = 1e-8;
  int max_iterations = 10000;
  FitMethod method = FitMethod::kProjectedNewton;
};

struct ComponentReport {
  int count = 0;
  bool disconnected = false;
  // Global item indices per component, each sorted.
  std::vector<std::vector<int>> members;
};

struct FitResult {
  int num_items = 0;
  // Fitted item indices, ascending; theta[k] is the utility of items[k].
  std::vector<int> items;
  UtilityVector theta;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<double> objective_trace;
  ComponentReport components;
  // Items that appear in no likelihood term.
  std::vector<int> dropped_items;

  // Utilities over all num_items, `fill` for dropped items.
  Eigen::VectorXd Expanded(double fill) const;
};

// Maximizes `objective` over utilities that are zero-sum and within [-b, b]
// on each connected component separately. Throws EstimationInfeasibleError
// when no item takes part in any term.
FitResult MaximizeOnFeasibleSet(const ConcaveObjective& objective,
                                const FitConfig& config);

// Infinity norm of P(theta + gradient) - theta.
double ProjectedGradientNorm(const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& gradient, double b);

}  // namespace rankbreak

#endif  // RANKBREAK_OBJECTIVE_H_
