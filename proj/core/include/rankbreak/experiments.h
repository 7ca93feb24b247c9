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

#ifndef RANKBREAK_EXPERIMENTS_H_
#define RANKBREAK_EXPERIMENTS_H_

// Synthetic scenarios, Monte Carlo trials, error metrics and baselines.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rankbreak/estimator.h"
#include "rankbreak/graph_metrics.h"
#include "rankbreak/objective.h"
#include "rankbreak/pl_model.h"
#include "rankbreak/rank_breaking.h"

namespace rankbreak {

// Counter-based stream split: the value depends only on (master, stream).
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

enum class Placement {
  kTopL,             // 1..l
  kRandomL,          // l distinct positions in 1..kappa-1, per sample
  kRandomLTopHalf,   // l distinct positions in 1..floor(kappa/2), per sample
  kRandomLFixed,     // l distinct positions in 1..kappa-1, once per dataset
  kBottomL,          // kappa-l..kappa-1
  kPositionP,        // the single position `position`
  kCustom,           // custom_positions
};

std::optional<Placement> ParsePlacement(std::string_view name);
std::string_view PlacementName(Placement placement);

enum class ThetaSource {
  kUniform,    // i.i.d. uniform on [-b, b], then centered
  kWorstCase,  // set-constant utilities of a chain or barbell design
  kExplicit,
};

// `count` samples over kappa-sets with l separators each.
struct SampleGroup {
  int kappa = 2;
  int ell = 1;
  int count = 0;
};

struct ScenarioSpec {
  int d = 64;
  int n = 1000;
  int kappa = 16;
  int ell = 4;
  // When nonempty, replaces (n, kappa, ell).
  std::vector<SampleGroup> groups;
  Placement placement = Placement::kRandomL;
  int position = 1;
  std::vector<int> custom_positions;
  // Offerings come from this design; uniform random kappa-sets otherwise.
  std::optional<TopologyKind> topology;
  ThetaSource theta_source = ThetaSource::kUniform;
  Eigen::VectorXd explicit_theta;
  double b = 2.0;
  int trials = 1;
  std::uint64_t seed = 0;
};

// Throws InvalidInputError when positions, sizes or the theta source do not
// fit together.
void ValidateScenario(const ScenarioSpec& spec);

struct ScenarioData {
  UtilityVector theta_star;
  std::vector<PartialOrder> orders;
};

ScenarioData GenerateScenarioData(const ScenarioSpec& spec,
                                  std::uint64_t seed);

enum class EstimatorKind {
  kRankBreaking,
  kFullBreaking,
  kMleTopL,
  kRestrictedBottomL,
  // As many pairs per sample as consistent breaking yields, drawn uniformly
  // from every readable relation, unit weights.
  kNaiveRandom,
};

std::optional<EstimatorKind> ParseEstimatorKind(std::string_view name);
std::string_view EstimatorKindName(EstimatorKind kind);

std::optional<WeightKind> ParseWeightKind(std::string_view name);
std::string_view WeightKindName(WeightKind kind);

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::kRankBreaking;
  WeightScheme scheme = WeightScheme::Optimal();
};

// Scaled squared error: c * ||a - b||^2.
double Mse(std::span<const double> estimate, std::span<const double> truth,
           double c = 1.0);
Eigen::VectorXd PerItemAbsError(std::span<const double> estimate,
                                std::span<const double> truth);

// theta* over the fitted items, re-centered within each fitted component so
// that it lives in the same identifiable set as the estimate.
Eigen::VectorXd AlignedTruth(const FitResult& fit,
                             const UtilityVector& theta_star);

struct MseNormalization {
  double c = 1.0;
  // Divide by the number of compared items.
  bool per_item = true;
};

struct TrialResult {
  std::vector<int> items;
  Eigen::VectorXd theta_hat;
  double mse = 0.0;
  // Bottom-l placements: error over the weakest restricted-size items that
  // were fitted, both vectors re-centered on that subset. NaN otherwise.
  double mse_weakest = 0.0;
  Eigen::VectorXd abs_error;
  double runtime_ms = 0.0;
  bool converged = false;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct EstimatorSummary {
  EstimatorSpec estimator;
  // One entry per trial; std::nullopt where the estimator threw.
  std::vector<std::optional<TrialResult>> trials;
  int failures = 0;
  double mean_mse = 0.0;
  Interval ci;
  double mean_mse_weakest = 0.0;
};

struct TrialOptions {
  FitConfig fit;
  MseNormalization normalization;
  int bootstrap_resamples = 1000;
  bool measure_runtime = false;
};

// Runs every estimator on the same dataset of each trial. Trial t uses
// DeriveSeed(spec.seed, t). The fit box is spec.b.
std::vector<EstimatorSummary> RunTrials(const ScenarioSpec& spec,
                                        std::span<const EstimatorSpec>
                                            estimators,
                                        const TrialOptions& options);

// MSE values of the trials where the estimator succeeded.
std::vector<double> SuccessfulMse(const EstimatorSummary& summary);

// Percentile bootstrap with `coverage` two-sided mass.
Interval BootstrapMeanInterval(std::span<const double> values, int resamples,
                               std::uint64_t seed, double coverage = 0.95);
// Paired resampling of the ratio mean(numerator) / mean(denominator).
Interval BootstrapRatioOfMeans(std::span<const double> numerator,
                               std::span<const double> denominator,
                               int resamples, std::uint64_t seed,
                               double coverage = 0.95);
// Paired resampling of mean(a) - mean(b).
Interval BootstrapMeanDifference(std::span<const double> a,
                                 std::span<const double> b, int resamples,
                                 std::uint64_t seed, double coverage = 0.95);

// Number of discordant pairs. Throws InvalidInputError unless both rank the
// same items.
int KendallDistance(const Ranking& first, const Ranking& second);
// Mean over samples of 1 - 4K / (kappa (kappa - 1)), where K compares each
// sample with `reference` restricted to the sample's items.
double KendallSampleCorrelation(const Ranking& reference,
                                std::span<const Ranking> samples);

struct BordaResult {
  // Indexed by item; kappa - rank summed over rankings.
  std::vector<double> scores;
  // Observed items by descending score, ties broken by smaller index.
  std::vector<int> order;
};
BordaResult BordaCount(std::span<const Ranking> rankings, int num_items);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(std::span<const double> x, std::span<const double> y);

enum class ScalingAxis { kN, kEll, kD };
std::optional<ScalingAxis> ParseScalingAxis(std::string_view name);
std::string_view ScalingAxisName(ScalingAxis axis);

struct ScalingRow {
  std::string scenario_id;
  std::string axis;
  double axis_value = 0.0;
  std::string estimator;
  std::string scheme;
  int trials = 0;
  double mean_mse = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  double runtime_ms = 0.0;
};

// Column names of ScalingRow in output order.
std::vector<std::string> ScalingHeader();

// One row per (axis value, estimator). Diagnostics come from the first
// trial's dataset under the estimator's weights.
std::vector<ScalingRow> ScalingTable(ScalingAxis axis,
                                     std::span<const int> axis_values,
                                     const ScenarioSpec& base,
                                     std::span<const EstimatorSpec> estimators,
                                     const TrialOptions& options,
                                     std::string_view scenario_id);

}  // namespace rankbreak

#endif  // RANKBREAK_EXPERIMENTS_H_
