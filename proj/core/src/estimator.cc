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

#include "rankbreak/estimator.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>

#include "rankbreak/errors.h"

namespace rankbreak {
namespace {

double LogSigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void CheckTheta(const Eigen::VectorXd& theta, const BrokenDataset& dataset) {
  if (theta.size() != dataset.num_items()) {
    throw InvalidInputError("utility vector has " +
                            std::to_string(theta.size()) +
                            " entries, dataset indexes " +
                            std::to_string(dataset.num_items()) + " items");
  }
}

std::vector<WeightedPair> UnitPairs(std::span<const PairOutcome> pairs) {
  std::vector<WeightedPair> out;
  out.reserve(pairs.size());
  for (const PairOutcome& p : pairs) out.push_back({p.winner, p.loser, 1.0});
  return out;
}

}  // namespace

BrokenDataset::BrokenDataset(std::span<const PartialOrder> orders,
                             int num_items)
    : num_items_(num_items) {
  if (num_items < 0) throw InvalidInputError("negative item count");
  samples_.reserve(orders.size());
  for (const PartialOrder& order : orders) {
    BrokenSample sample;
    sample.kappa = order.kappa();
    sample.offering = order.offering().items();
    std::sort(sample.offering.begin(), sample.offering.end());
    if (sample.offering.front() < 0 || sample.offering.back() >= num_items) {
      throw InvalidInputError("partial order references item outside [0, " +
                              std::to_string(num_items) + ")");
    }
    sample.graphs = BreakIntoGraphs(order);
    for (RankBreakingGraph& g : sample.graphs) {
      std::sort(g.bottom.begin(), g.bottom.end());
    }
    samples_.push_back(std::move(sample));
  }
  weights_ = WeightsFor(WeightScheme::Optimal(), *this);
}

void BrokenDataset::SetWeights(WeightTable weights) {
  if (weights.size() != samples_.size()) {
    throw InvalidInputError("weight table has " +
                            std::to_string(weights.size()) + " rows for " +
                            std::to_string(samples_.size()) + " samples");
  }
  for (std::size_t j = 0; j < samples_.size(); ++j) {
    if (weights[j].size() != samples_[j].graphs.size()) {
      throw InvalidInputError("weight row " + std::to_string(j) +
                              " does not match its separator count");
    }
    for (double w : weights[j]) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw InvalidInputError("weights must be finite and nonnegative");
      }
    }
  }
  weights_ = std::move(weights);
}

BrokenDataset BrokenDataset::WithScheme(const WeightScheme& scheme) const {
  BrokenDataset copy = *this;
  copy.SetWeights(WeightsFor(scheme, *this));
  return copy;
}

std::vector<WeightedPair> BrokenDataset::Pairs() const {
  std::vector<WeightedPair> pairs;
  for (std::size_t j = 0; j < samples_.size(); ++j) {
    const BrokenSample& s = samples_[j];
    for (std::size_t a = 0; a < s.graphs.size(); ++a) {
      for (int loser : s.graphs[a].bottom) {
        pairs.push_back({s.graphs[a].separator, loser, weights_[j][a]});
      }
    }
  }
  return pairs;
}

WeightTable WeightsFor(const WeightScheme& scheme,
                       const BrokenDataset& dataset) {
  const auto& samples = dataset.samples();
  if (scheme.kind == WeightKind::kCustom) {
    if (scheme.custom.size() != samples.size()) {
      throw InvalidInputError("custom weight table is missing rows");
    }
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (scheme.custom[j].size() != samples[j].graphs.size()) {
        throw InvalidInputError("custom weight table is missing entries for "
                                "sample " + std::to_string(j));
      }
    }
    return scheme.custom;
  }
  WeightTable table(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const BrokenSample& s = samples[j];
    for (const RankBreakingGraph& g : s.graphs) {
      switch (scheme.kind) {
        case WeightKind::kOptimal:
          table[j].push_back(1.0 / (s.kappa - g.position));
          break;
        case WeightKind::kUniform:
          table[j].push_back(1.0);
          break;
        case WeightKind::kInverseKappa:
          table[j].push_back(1.0 / s.kappa);
          break;
        case WeightKind::kCustom:
          break;
      }
    }
  }
  return table;
}

double RbLogLikelihood(const Eigen::VectorXd& theta,
                       const BrokenDataset& dataset) {
  CheckTheta(theta, dataset);
  double value = 0.0;
  for (const WeightedPair& p : dataset.Pairs()) {
    value += p.weight * LogSigmoid(theta[p.winner] - theta[p.loser]);
  }
  return value;
}

Eigen::VectorXd RbGradient(const Eigen::VectorXd& theta,
                           const BrokenDataset& dataset) {
  CheckTheta(theta, dataset);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dataset.num_items());
  for (const WeightedPair& p : dataset.Pairs()) {
    // d/d theta_winner of log sigmoid(theta_w - theta_l)
    const double g = p.weight * Sigmoid(theta[p.loser] - theta[p.winner]);
    grad[p.winner] += g;
    grad[p.loser] -= g;
  }
  return grad;
}

Eigen::MatrixXd RbHessian(const Eigen::VectorXd& theta,
                          const BrokenDataset& dataset) {
  CheckTheta(theta, dataset);
  const int d = dataset.num_items();
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d, d);
  for (const WeightedPair& p : dataset.Pairs()) {
    const double s = Sigmoid(theta[p.winner] - theta[p.loser]);
    const double c = p.weight * s * (1.0 - s);
    hess(p.winner, p.winner) -= c;
    hess(p.loser, p.loser) -= c;
    hess(p.winner, p.loser) += c;
    hess(p.loser, p.winner) += c;
  }
  return hess;
}

FitResult FitRankBreaking(const BrokenDataset& dataset,
                          const FitConfig& config) {
  const std::vector<WeightedPair> pairs = dataset.Pairs();
  return MaximizeOnFeasibleSet(PairwiseObjective(dataset.num_items(), pairs),
                               config);
}

FitResult FitFullBreaking(std::span<const PartialOrder> orders, int num_items,
                          const FitConfig& config) {
  std::vector<WeightedPair> pairs;
  for (const PartialOrder& order : orders) {
    for (const PairOutcome& p : FullBreakingPairs(order)) {
      pairs.push_back({p.winner, p.loser, 1.0});
    }
  }
  return MaximizeOnFeasibleSet(PairwiseObjective(num_items, pairs), config);
}

FitResult FitFullBreaking(std::span<const PosetDag> dags, int num_items,
                          const FitConfig& config) {
  std::vector<WeightedPair> pairs;
  for (const PosetDag& dag : dags) {
    const std::vector<WeightedPair> more = UnitPairs(FullBreakingPairs(dag));
    pairs.insert(pairs.end(), more.begin(), more.end());
  }
  return MaximizeOnFeasibleSet(PairwiseObjective(num_items, pairs), config);
}

FitResult FitMleTopL(std::span<const TopRanking> data, int num_items,
                     const FitConfig& config) {
  return MaximizeOnFeasibleSet(
      PlTopObjective(num_items, std::vector<TopRanking>(data.begin(),
                                                        data.end())),
      config);
}

int RestrictedSize(int ell, int num_items, int kappa) {
  if (ell < 1 || num_items < 1 || kappa < 2) {
    throw InvalidInputError("restricted size needs ell >= 1, d >= 1, "
                            "kappa >= 2");
  }
  return static_cast<int>((static_cast<long long>(ell) * num_items) /
                          (2LL * kappa));
}

FitResult FitRestrictedBottomL(const BrokenDataset& dataset,
                               std::span<const int> weakest_first,
                               int restricted_size, const FitConfig& config) {
  if (restricted_size < 2) {
    throw InvalidInputError("restricted item count must be at least 2");
  }
  if (static_cast<std::size_t>(restricted_size) > weakest_first.size()) {
    throw InvalidInputError("reference ordering is shorter than the "
                            "restricted item count");
  }
  // Local index = rank among the weakest items.
  std::vector<int> local(dataset.num_items(), -1);
  for (int k = 0; k < restricted_size; ++k) {
    const int item = weakest_first[k];
    if (item < 0 || item >= dataset.num_items() || local[item] != -1) {
      throw InvalidInputError("reference ordering has an invalid or repeated "
                              "item");
    }
    local[item] = k;
  }
  std::vector<WeightedPair> kept;
  for (const WeightedPair& p : dataset.Pairs()) {
    if (local[p.winner] >= 0 && local[p.loser] >= 0) {
      kept.push_back({local[p.winner], local[p.loser], 1.0});
    }
  }
  if (kept.empty()) {
    throw EstimationInfeasibleError(
        "no extracted pair has both items among the restricted set");
  }
  FitConfig widened = config;
  widened.b = 2.0 * config.b;
  FitResult local_fit =
      MaximizeOnFeasibleSet(PairwiseObjective(restricted_size, kept), widened);

  // Map local indices back to dataset items.
  std::vector<std::pair<int, int>> order;  // (item, local position in fit)
  for (std::size_t k = 0; k < local_fit.items.size(); ++k) {
    order.emplace_back(weakest_first[local_fit.items[k]], static_cast<int>(k));
  }
  std::sort(order.begin(), order.end());
  Eigen::VectorXd theta(static_cast<Eigen::Index>(order.size()));
  std::vector<int> items;
  for (std::size_t k = 0; k < order.size(); ++k) {
    items.push_back(order[k].first);
    theta[static_cast<Eigen::Index>(k)] = local_fit.theta[order[k].second];
  }
  auto remap = [&](std::vector<int> group) {
    for (int& x : group) x = weakest_first[x];
    std::sort(group.begin(), group.end());
    return group;
  };
  ComponentReport report = local_fit.components;
  for (auto& group : report.members) group = remap(group);
  std::vector<int> dropped = remap(local_fit.dropped_items);

  return FitResult{dataset.num_items(),
                   std::move(items),
                   UtilityVector(std::move(theta), widened.b),
                   local_fit.iterations,
                   local_fit.gradient_norm,
                   local_fit.converged,
                   std::move(local_fit.objective_trace),
                   std::move(report),
                   std::move(dropped)};
}

}  // namespace rankbreak
