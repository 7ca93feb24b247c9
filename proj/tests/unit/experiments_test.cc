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

#include "rankbreak/experiments.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rankbreak/errors.h"

namespace rankbreak {
namespace {

TEST(SeedTest, StreamsDiffer) {
  EXPECT_EQ(DeriveSeed(1, 2), DeriveSeed(1, 2));
  EXPECT_NE(DeriveSeed(1, 2), DeriveSeed(1, 3));
  EXPECT_NE(DeriveSeed(1, 2), DeriveSeed(2, 2));
}

TEST(NamesTest, RoundTrip) {
  for (Placement p : {Placement::kTopL, Placement::kRandomL,
                      Placement::kRandomLTopHalf, Placement::kRandomLFixed,
                      Placement::kBottomL, Placement::kPositionP,
                      Placement::kCustom}) {
    EXPECT_EQ(ParsePlacement(PlacementName(p)), p);
  }
  for (EstimatorKind k :
       {EstimatorKind::kRankBreaking, EstimatorKind::kFullBreaking,
        EstimatorKind::kMleTopL, EstimatorKind::kRestrictedBottomL,
        EstimatorKind::kNaiveRandom}) {
    EXPECT_EQ(ParseEstimatorKind(EstimatorKindName(k)), k);
  }
  for (WeightKind w : {WeightKind::kOptimal, WeightKind::kUniform,
                       WeightKind::kInverseKappa}) {
    EXPECT_EQ(ParseWeightKind(WeightKindName(w)), w);
  }
  EXPECT_FALSE(ParsePlacement("middle").has_value());
}

TEST(ScenarioTest, Validation) {
  ScenarioSpec spec;
  spec.kappa = 70;
  EXPECT_THROW(ValidateScenario(spec), InvalidInputError);
  spec = ScenarioSpec();
  spec.ell = 16;
  EXPECT_THROW(ValidateScenario(spec), InvalidInputError);
  spec = ScenarioSpec();
  spec.placement = Placement::kPositionP;
  spec.position = 16;
  EXPECT_THROW(ValidateScenario(spec), InvalidInputError);
  spec = ScenarioSpec();
  spec.b = -1.0;
  EXPECT_THROW(ValidateScenario(spec), InvalidInputError);
  EXPECT_NO_THROW(ValidateScenario(ScenarioSpec()));
}

TEST(ScenarioTest, PlacementsProduceExpectedPositions) {
  ScenarioSpec spec;
  spec.d = 20;
  spec.n = 30;
  spec.kappa = 8;
  spec.ell = 3;
  spec.b = 1.0;
  spec.placement = Placement::kTopL;
  for (const auto& o : GenerateScenarioData(spec, 1).orders) {
    EXPECT_EQ(o.positions(), std::vector<int>({1, 2, 3}));
  }
  spec.placement = Placement::kBottomL;
  for (const auto& o : GenerateScenarioData(spec, 1).orders) {
    EXPECT_EQ(o.positions(), std::vector<int>({5, 6, 7}));
  }
  spec.placement = Placement::kRandomLTopHalf;
  for (const auto& o : GenerateScenarioData(spec, 1).orders) {
    EXPECT_EQ(o.num_separators(), 3);
    EXPECT_LE(o.positions().back(), 4);
  }
  spec.placement = Placement::kPositionP;
  spec.position = 4;
  for (const auto& o : GenerateScenarioData(spec, 1).orders) {
    EXPECT_EQ(o.positions(), std::vector<int>({4}));
  }
}

TEST(ScenarioTest, DeterministicAndFeasible) {
  ScenarioSpec spec;
  spec.d = 30;
  spec.n = 40;
  spec.kappa = 6;
  spec.ell = 2;
  const ScenarioData a = GenerateScenarioData(spec, 5);
  const ScenarioData b = GenerateScenarioData(spec, 5);
  EXPECT_EQ(a.theta_star.values(), b.theta_star.values());
  ASSERT_EQ(a.orders.size(), 40u);
  for (std::size_t j = 0; j < a.orders.size(); ++j) {
    EXPECT_EQ(a.orders[j], b.orders[j]);
  }
  EXPECT_NEAR(a.theta_star.values().sum(), 0.0, 1e-9);
  EXPECT_LE(a.theta_star.values().cwiseAbs().maxCoeff(), spec.b + 1e-12);
}

TEST(ScenarioTest, HeterogeneousGroups) {
  ScenarioSpec spec;
  spec.d = 20;
  spec.groups = {{10, 3, 5}, {2, 1, 7}};
  spec.placement = Placement::kTopL;
  const ScenarioData data = GenerateScenarioData(spec, 2);
  ASSERT_EQ(data.orders.size(), 12u);
  int big = 0;
  for (const auto& o : data.orders) big += o.kappa() == 10 ? 1 : 0;
  EXPECT_EQ(big, 5);
}

TEST(MetricsTest, MseAndAbsError) {
  const std::vector<double> est = {1.0, -1.0};
  const std::vector<double> truth = {0.5, -0.5};
  EXPECT_DOUBLE_EQ(Mse(est, truth), 0.5);
  EXPECT_DOUBLE_EQ(Mse(est, truth, 2.0), 1.0);
  const Eigen::VectorXd abs = PerItemAbsError(est, truth);
  EXPECT_DOUBLE_EQ(abs[0], 0.5);
}

TEST(TrialsTest, PairedAndDeterministic) {
  ScenarioSpec spec;
  spec.d = 12;
  spec.n = 150;
  spec.kappa = 4;
  spec.ell = 2;
  spec.b = 1.0;
  spec.trials = 3;
  spec.seed = 8;
  const std::vector<EstimatorSpec> est = {
      {EstimatorKind::kRankBreaking, WeightScheme::Optimal()},
      {EstimatorKind::kFullBreaking, WeightScheme::Optimal()}};
  TrialOptions options;
  options.bootstrap_resamples = 200;
  const auto a = RunTrials(spec, est, options);
  const auto b = RunTrials(spec, est, options);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].mean_mse, b[0].mean_mse);
  EXPECT_EQ(a[1].mean_mse, b[1].mean_mse);
  EXPECT_EQ(a[0].failures, 0);
  EXPECT_LE(a[0].ci.low, a[0].mean_mse);
  EXPECT_GE(a[0].ci.high, a[0].mean_mse);
  EXPECT_EQ(SuccessfulMse(a[0]).size(), 3u);
}

TEST(BootstrapTest, ConstantAndOrdering) {
  const std::vector<double> same(20, 2.0);
  const Interval flat = BootstrapMeanInterval(same, 500, 1);
  EXPECT_DOUBLE_EQ(flat.low, 2.0);
  EXPECT_DOUBLE_EQ(flat.high, 2.0);
  std::vector<double> a;
  std::vector<double> b;
  for (int i = 0; i < 50; ++i) {
    a.push_back(2.0 + 0.1 * (i % 5));
    b.push_back(1.0 + 0.1 * (i % 7));
  }
  const Interval ratio = BootstrapRatioOfMeans(a, b, 500, 2);
  EXPECT_LT(ratio.low, ratio.high);
  EXPECT_GT(ratio.low, 1.5);
  const Interval diff = BootstrapMeanDifference(a, b, 500, 3);
  EXPECT_GT(diff.low, 0.8);
  const Interval narrow = BootstrapMeanDifference(a, b, 500, 3, 0.5);
  EXPECT_GE(narrow.low, diff.low);
}

TEST(KendallTest, DistanceAndCorrelation) {
  const Ranking r({0, 1, 2, 3});
  EXPECT_EQ(KendallDistance(r, r), 0);
  EXPECT_EQ(KendallDistance(r, Ranking({3, 2, 1, 0})), 6);
  EXPECT_EQ(KendallDistance(r, Ranking({1, 0, 2, 3})), 1);
  const std::vector<Ranking> samples = {Ranking({0, 1, 2, 3}),
                                        Ranking({3, 2, 1, 0})};
  EXPECT_DOUBLE_EQ(KendallSampleCorrelation(r, samples), 0.0);
  // Samples over a subset compare against the induced order.
  const std::vector<Ranking> sub = {Ranking({2, 0})};
  EXPECT_DOUBLE_EQ(KendallSampleCorrelation(r, sub), -1.0);
  EXPECT_THROW(KendallDistance(r, Ranking({0, 1, 2, 4})), InvalidInputError);
}

TEST(BordaTest, Scores) {
  const std::vector<Ranking> rankings = {Ranking({0, 1, 2}),
                                         Ranking({1, 0, 2}),
                                         Ranking({1, 2})};
  const BordaResult r = BordaCount(rankings, 4);
  // kappa - rank: 2,1,0 then 2,1,0 then 1,0.
  EXPECT_EQ(r.scores, std::vector<double>({3.0, 4.0, 0.0, 0.0}));
  EXPECT_EQ(r.order.front(), 1);
}

TEST(SlopeTest, PowerLaw) {
  const std::vector<double> x = {1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 / v);
  EXPECT_NEAR(LogLogSlope(x, y), -1.0, 1e-12);
}

TEST(ScalingTableTest, RowsPerValueAndEstimator) {
  ScenarioSpec base;
  base.d = 10;
  base.n = 100;
  base.kappa = 4;
  base.ell = 2;
  base.b = 1.0;
  base.trials = 2;
  const std::vector<EstimatorSpec> est = {
      {EstimatorKind::kRankBreaking, WeightScheme::Optimal()},
      {EstimatorKind::kRankBreaking, WeightScheme::Uniform()}};
  TrialOptions options;
  options.bootstrap_resamples = 100;
  const std::vector<int> values = {50, 100};
  const auto rows =
      ScalingTable(ScalingAxis::kN, values, base, est, options, "s1");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].scenario_id, "s1");
  EXPECT_EQ(rows[0].axis, "n");
  EXPECT_EQ(rows[0].axis_value, 50.0);
  EXPECT_EQ(rows[1].scheme, "uniform");
  EXPECT_GT(rows[0].alpha, 0.0);
  EXPECT_EQ(rows[0].runtime_ms, 0.0);
  EXPECT_EQ(ScalingHeader().size(), 14u);
}

}  // namespace
}  // namespace rankbreak
