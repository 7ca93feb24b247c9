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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rankbreak/errors.h"
#include "rankbreak/experiments.h"
#include "rankbreak/objective.h"
#include "testing/oracles.h"

namespace rankbreak {
namespace {

std::vector<PartialOrder> RandomOrders(int d, int n, int kappa, int ell,
                                       const UtilityVector& theta,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PartialOrder> out;
  std::vector<int> all(d);
  for (int i = 0; i < d; ++i) all[i] = i;
  for (int j = 0; j < n; ++j) {
    std::shuffle(all.begin(), all.end(), rng);
    const Offering o(std::vector<int>(all.begin(), all.begin() + kappa));
    std::vector<int> pos(kappa - 1);
    for (int p = 1; p < kappa; ++p) pos[p - 1] = p;
    std::shuffle(pos.begin(), pos.end(), rng);
    pos.resize(ell);
    std::sort(pos.begin(), pos.end());
    out.push_back(PartialOrderFromRanking(SampleRanking(theta, o, rng), pos));
  }
  return out;
}

UtilityVector RandomTheta(int d, double b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-b, b);
  Eigen::VectorXd raw(d);
  for (int i = 0; i < d; ++i) raw[i] = unif(rng);
  return ProjectFeasible(raw, b);
}

TEST(WeightsTest, SchemesOnOneSample) {
  const std::vector<PartialOrder> orders = {PartialOrderFromRanking(
      Ranking({0, 1, 2, 3, 4}), std::vector<int>{1, 3})};
  const BrokenDataset ds(orders, 5);
  const WeightTable opt = WeightsFor(WeightScheme::Optimal(), ds);
  EXPECT_DOUBLE_EQ(opt[0][0], 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(opt[0][1], 1.0 / 2.0);
  EXPECT_EQ(ds.weights(), opt);  // default
  const WeightTable uni = WeightsFor(WeightScheme::Uniform(), ds);
  EXPECT_EQ(uni, WeightTable({{1.0, 1.0}}));
  const WeightTable inv = WeightsFor(WeightScheme::InverseKappa(), ds);
  EXPECT_EQ(inv, WeightTable({{0.2, 0.2}}));
}

TEST(WeightsTest, SetWeightsValidates) {
  const std::vector<PartialOrder> orders = {PartialOrderFromRanking(
      Ranking({0, 1, 2}), std::vector<int>{1, 2})};
  BrokenDataset ds(orders, 3);
  EXPECT_THROW(ds.SetWeights({{1.0}}), InvalidInputError);
  EXPECT_THROW(ds.SetWeights({{1.0, -0.5}}), InvalidInputError);
  EXPECT_THROW(ds.SetWeights({{1.0, NAN}}), InvalidInputError);
  EXPECT_NO_THROW(ds.SetWeights({{0.0, 3.0}}));
}

TEST(BrokenDatasetTest, PairsFollowSeparators) {
  const std::vector<PartialOrder> orders = {PartialOrderFromRanking(
      Ranking({3, 1, 2, 0}), std::vector<int>{2})};
  const BrokenDataset ds(orders, 4);
  const auto pairs = ds.Pairs();
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].winner, 1);
  EXPECT_EQ(pairs[0].loser, 0);
  EXPECT_EQ(pairs[1].loser, 2);
  EXPECT_DOUBLE_EQ(pairs[0].weight, 0.5);
}

TEST(BrokenDatasetTest, RejectsItemOutOfRange) {
  const std::vector<PartialOrder> orders = {PartialOrderFromRanking(
      Ranking({0, 7}), std::vector<int>{1})};
  EXPECT_THROW(BrokenDataset(orders, 3), InvalidInputError);
}

TEST(LikelihoodTest, MatchesPairSum) {
  const UtilityVector theta = RandomTheta(6, 1.0, 1);
  const auto orders = RandomOrders(6, 10, 4, 2, theta, 2);
  const BrokenDataset ds(orders, 6);
  double expected = 0.0;
  for (const auto& p : ds.Pairs()) {
    const double w = theta[p.winner];
    const double l = theta[p.loser];
    expected += p.weight * (w - std::log(std::exp(w) + std::exp(l)));
  }
  EXPECT_NEAR(RbLogLikelihood(theta.values(), ds), expected, 1e-12);
}

TEST(LikelihoodTest, GradientSumsToZeroAndHessianIsLaplacian) {
  const UtilityVector theta = RandomTheta(7, 2.0, 3);
  const BrokenDataset ds(RandomOrders(7, 12, 5, 3, theta, 4), 7);
  EXPECT_NEAR(RbGradient(theta.values(), ds).sum(), 0.0, 1e-12);
  const Eigen::MatrixXd h = RbHessian(theta.values(), ds);
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(h.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LikelihoodTest, FiniteDifferences) {
  const UtilityVector theta = RandomTheta(5, 1.0, 5);
  const BrokenDataset ds(RandomOrders(5, 8, 4, 2, theta, 6), 5);
  const Eigen::VectorXd fd = testing::CentralDifferenceGradient(
      [&](const Eigen::VectorXd& x) { return RbLogLikelihood(x, ds); },
      theta.values(), 1e-5);
  EXPECT_LT((fd - RbGradient(theta.values(), ds)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FitTest, PairwiseDataMatchesTopOneMle) {
  // With kappa = 2 both likelihoods coincide.
  const UtilityVector theta = RandomTheta(5, 1.0, 7);
  const auto orders = RandomOrders(5, 200, 2, 1, theta, 8);
  std::vector<TopRanking> tops;
  for (const auto& o : orders) tops.push_back(ToTopRanking(o));
  FitConfig config;
  config.b = 3.0;
  const FitResult rb = FitRankBreaking(BrokenDataset(orders, 5), config);
  const FitResult mle = FitMleTopL(tops, 5, config);
  EXPECT_TRUE(rb.converged);
  EXPECT_TRUE(mle.converged);
  EXPECT_LT((rb.theta.values() - mle.theta.values()).cwiseAbs().maxCoeff(),
            1e-7);
}

TEST(FitTest, MethodsAgree) {
  const UtilityVector theta = RandomTheta(8, 1.0, 9);
  const BrokenDataset ds(RandomOrders(8, 150, 4, 2, theta, 10), 8);
  FitConfig config;
  config.b = 1.0;
  config.max_iterations = 200000;
  const FitResult newton = FitRankBreaking(ds, config);
  config.method = FitMethod::kProjectedGradient;
  const FitResult pg = FitRankBreaking(ds, config);
  config.method = FitMethod::kMinorizationMaximization;
  const FitResult mm = FitRankBreaking(ds, config);
  EXPECT_TRUE(newton.converged);
  EXPECT_TRUE(pg.converged) << pg.iterations << " " << pg.gradient_norm;
  EXPECT_TRUE(mm.converged) << mm.iterations << " " << mm.gradient_norm;
  EXPECT_LT((newton.theta.values() - pg.theta.values()).cwiseAbs().maxCoeff(),
            1e-5);
  EXPECT_LT((newton.theta.values() - mm.theta.values()).cwiseAbs().maxCoeff(),
            1e-5);
}

TEST(FitTest, ObjectiveTraceIsMonotone) {
  const UtilityVector theta = RandomTheta(10, 2.0, 11);
  const BrokenDataset ds(RandomOrders(10, 80, 5, 2, theta, 12), 10);
  for (FitMethod method :
       {FitMethod::kProjectedNewton, FitMethod::kProjectedGradient,
        FitMethod::kMinorizationMaximization}) {
    FitConfig config;
    config.b = 2.0;
    config.method = method;
    const FitResult fit = FitRankBreaking(ds, config);
    ASSERT_GE(fit.objective_trace.size(), 2u);
    for (std::size_t k = 1; k < fit.objective_trace.size(); ++k) {
      EXPECT_GE(fit.objective_trace[k], fit.objective_trace[k - 1] - 1e-12);
    }
  }
}

TEST(FitTest, StaysFeasibleAndRecovers) {
  const UtilityVector theta = RandomTheta(12, 1.0, 13);
  const BrokenDataset ds(RandomOrders(12, 4000, 6, 3, theta, 14), 12);
  FitConfig config;
  config.b = 1.0;
  const FitResult fit = FitRankBreaking(ds, config);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.theta.values().sum(), 0.0, 1e-9);
  EXPECT_LE(fit.theta.values().cwiseAbs().maxCoeff(), 1.0 + 1e-12);
  EXPECT_LT((fit.theta.values() - theta.values()).squaredNorm() / 12, 0.01);
}

TEST(FitTest, DisconnectedAndDroppedItems) {
  std::vector<PartialOrder> orders;
  for (int k = 0; k < 3; ++k) {
    orders.push_back(PartialOrderFromRanking(Ranking({0, 1}),
                                             std::vector<int>{1}));
    orders.push_back(PartialOrderFromRanking(Ranking({1, 0}),
                                             std::vector<int>{1}));
    orders.push_back(PartialOrderFromRanking(Ranking({2, 3}),
                                             std::vector<int>{1}));
  }
  orders.push_back(PartialOrderFromRanking(Ranking({3, 2}),
                                           std::vector<int>{1}));
  FitConfig config;
  config.b = 5.0;
  const FitResult fit = FitRankBreaking(BrokenDataset(orders, 5), config);
  EXPECT_EQ(fit.items, std::vector<int>({0, 1, 2, 3}));
  EXPECT_EQ(fit.dropped_items, std::vector<int>({4}));
  EXPECT_EQ(fit.components.count, 2);
  EXPECT_TRUE(fit.components.disconnected);
  EXPECT_NEAR(fit.theta[0] + fit.theta[1], 0.0, 1e-9);
  EXPECT_NEAR(fit.theta[2] + fit.theta[3], 0.0, 1e-9);
  EXPECT_NEAR(fit.theta[2] - fit.theta[3], std::log(3.0), 1e-6);
  const Eigen::VectorXd full = fit.Expanded(-9.0);
  EXPECT_EQ(full.size(), 5);
  EXPECT_EQ(full[4], -9.0);
}

TEST(FullBreakingTest, DagAndPartialOrderAgree) {
  const PosetDag dag = {{0, 1, 2, 3, 4, 5},
                        {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}}};
  std::vector<PosetDag> dags(5, dag);
  std::vector<PartialOrder> orders(5, PartialOrderFromDag(dag).order);
  // Add reversed evidence so the box does not bind.
  const PosetDag flipped = {{0, 1, 2, 3, 4, 5},
                            {{5, 4}, {4, 3}, {3, 2}, {2, 1}, {1, 0}}};
  dags.push_back(flipped);
  orders.push_back(PartialOrderFromDag(flipped).order);
  FitConfig config;
  config.b = 4.0;
  const FitResult a = FitFullBreaking(std::span<const PosetDag>(dags), 6, config);
  const FitResult b =
      FitFullBreaking(std::span<const PartialOrder>(orders), 6, config);
  EXPECT_LT((a.theta.values() - b.theta.values()).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(MleTopLTest, StationaryOnInterior) {
  const UtilityVector theta = RandomTheta(6, 0.5, 15);
  std::mt19937_64 rng(16);
  std::vector<TopRanking> data;
  const Offering o({0, 1, 2, 3, 4, 5});
  for (int j = 0; j < 400; ++j) data.push_back({SampleRanking(theta, o, rng), 3});
  FitConfig config;
  config.b = 5.0;
  const FitResult fit = FitMleTopL(data, 6, config);
  EXPECT_TRUE(fit.converged);
  const PlTopObjective obj(6, data);
  const Eigen::VectorXd g = obj.Gradient(fit.Expanded(0.0));
  EXPECT_LT((g.array() - g.mean()).abs().maxCoeff(), 1e-6);
}

TEST(MleTopLTest, BoxActiveOptimumConvergesQuickly) {
  // Strong items pile up at the box edge; every method must still certify.
  Eigen::VectorXd raw = Eigen::VectorXd::LinSpaced(16, -3.0, 3.0);
  const UtilityVector theta = ProjectFeasible(raw, 2.0);
  std::mt19937_64 rng(21);
  std::vector<int> all(16);
  for (int i = 0; i < 16; ++i) all[i] = i;
  std::vector<TopRanking> data;
  for (int j = 0; j < 500; ++j) {
    data.push_back({SampleRanking(theta, Offering(all), rng), 2});
  }
  FitConfig config;
  config.b = 1.5;
  const FitResult newton = FitMleTopL(data, 16, config);
  EXPECT_TRUE(newton.converged);
  EXPECT_LT(newton.iterations, 60);
  config.method = FitMethod::kProjectedGradient;
  const FitResult pg = FitMleTopL(data, 16, config);
  EXPECT_TRUE(pg.converged);
  EXPECT_LT((newton.theta.values() - pg.theta.values()).cwiseAbs().maxCoeff(),
            1e-6);
}

TEST(RankBreakingTest, BoundaryItemsDoNotStallNewton) {
  // Bottom-l data where the Newton move of a box item points outward; this
  // used to sit at a projected-gradient norm near 0.6 forever.
  ScenarioSpec spec;
  spec.d = 128;
  spec.n = 1024;
  spec.kappa = 16;
  spec.ell = 8;
  spec.placement = Placement::kBottomL;
  const ScenarioData data = GenerateScenarioData(spec, DeriveSeed(909, 19));
  const BrokenDataset broken(data.orders, spec.d);
  FitConfig config;
  config.max_iterations = 200;
  const FitResult fit =
      FitRankBreaking(broken.WithScheme(WeightScheme::Optimal()), config);
  EXPECT_TRUE(fit.converged);
  EXPECT_LT(fit.iterations, 50);
}

TEST(RestrictedTest, Size) {
  EXPECT_EQ(RestrictedSize(8, 128, 16), 32);
  EXPECT_EQ(RestrictedSize(3, 10, 4), 3);
}

TEST(RestrictedTest, FitsOnlyWeakestItems) {
  const UtilityVector theta = RandomTheta(12, 1.0, 17);
  std::mt19937_64 rng(18);
  std::vector<PartialOrder> orders;
  std::vector<int> all(12);
  for (int i = 0; i < 12; ++i) all[i] = i;
  for (int j = 0; j < 300; ++j) {
    std::shuffle(all.begin(), all.end(), rng);
    const Offering o(std::vector<int>(all.begin(), all.begin() + 6));
    orders.push_back(PartialOrderFromRanking(SampleRanking(theta, o, rng),
                                             std::vector<int>{3, 4, 5}));
  }
  std::vector<int> weakest(12);
  for (int i = 0; i < 12; ++i) weakest[i] = i;
  std::sort(weakest.begin(), weakest.end(),
            [&](int x, int y) { return theta[x] < theta[y]; });
  FitConfig config;
  config.b = 1.0;
  const BrokenDataset ds(orders, 12);
  const FitResult fit = FitRestrictedBottomL(ds, weakest, 5, config);
  std::vector<int> expected(weakest.begin(), weakest.begin() + 5);
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(fit.items, expected);
  EXPECT_LE(fit.theta.values().cwiseAbs().maxCoeff(), 2.0 + 1e-12);
  EXPECT_THROW(FitRestrictedBottomL(ds, weakest, 1, config), InvalidInputError);
}

TEST(RestrictedTest, NoSurvivingPairIsInfeasible) {
  const std::vector<PartialOrder> orders = {PartialOrderFromRanking(
      Ranking({0, 1, 2, 3}), std::vector<int>{1})};
  const BrokenDataset ds(orders, 4);
  const std::vector<int> weakest = {3, 2, 1, 0};
  FitConfig config;
  EXPECT_THROW(FitRestrictedBottomL(ds, weakest, 2, config),
               EstimationInfeasibleError);
}

}  // namespace
}  // namespace rankbreak
