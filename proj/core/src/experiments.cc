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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>
#include <utility>

#include "rankbreak/errors.h"

namespace rankbreak {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sub-streams of one dataset seed.
enum Stream : std::uint64_t {
  kThetaStream = 1,
  kOfferingStream = 2,
  kPositionStream = 3,
  kRankingStream = 4,
  kNaiveStream = 5,
};

std::vector<int> DistinctSorted(int count, int lo, int hi,
                                std::mt19937_64& rng) {
  std::vector<int> pool(hi - lo + 1);
  std::iota(pool.begin(), pool.end(), lo);
  for (int k = 0; k < count; ++k) {
    std::uniform_int_distribution<int> pick(k, static_cast<int>(pool.size()) - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<int> RandomKSet(int d, int kappa, std::mt19937_64& rng) {
  return DistinctSorted(kappa, 0, d - 1, rng);
}

std::vector<SampleGroup> GroupsOf(const ScenarioSpec& spec) {
  if (!spec.groups.empty()) return spec.groups;
  return {SampleGroup{spec.kappa, spec.ell, spec.n}};
}

void CheckPositionsFit(const ScenarioSpec& spec, const SampleGroup& g) {
  auto fail = [](const std::string& what) { throw InvalidInputError(what); };
  if (g.kappa < 2 || g.kappa > spec.d) fail("kappa must lie in [2, d]");
  if (g.count < 0) fail("group sample count must be nonnegative");
  switch (spec.placement) {
    case Placement::kTopL:
    case Placement::kRandomL:
    case Placement::kRandomLFixed:
    case Placement::kBottomL:
      if (g.ell < 1 || g.ell > g.kappa - 1) fail("l must lie in [1, kappa-1]");
      break;
    case Placement::kRandomLTopHalf:
      if (g.ell < 1 || g.ell > g.kappa / 2) {
        fail("l must lie in [1, floor(kappa/2)] for top-half placement");
      }
      break;
    case Placement::kPositionP:
      if (spec.position < 1 || spec.position > g.kappa - 1) {
        fail("position must lie in [1, kappa-1]");
      }
      break;
    case Placement::kCustom: {
      const auto& pos = spec.custom_positions;
      if (pos.empty()) fail("custom placement needs positions");
      for (std::size_t a = 0; a < pos.size(); ++a) {
        if (pos[a] < 1 || pos[a] > g.kappa - 1 ||
            (a > 0 && pos[a] <= pos[a - 1])) {
          fail("custom positions must increase within [1, kappa-1]");
        }
      }
      break;
    }
  }
}

std::vector<int> PositionsFor(Placement placement, const ScenarioSpec& spec,
                              const SampleGroup& g,
                              const std::vector<int>& fixed,
                              std::mt19937_64& rng) {
  switch (placement) {
    case Placement::kTopL: {
      std::vector<int> p(g.ell);
      std::iota(p.begin(), p.end(), 1);
      return p;
    }
    case Placement::kRandomL:
      return DistinctSorted(g.ell, 1, g.kappa - 1, rng);
    case Placement::kRandomLTopHalf:
      return DistinctSorted(g.ell, 1, g.kappa / 2, rng);
    case Placement::kRandomLFixed:
      return fixed;
    case Placement::kBottomL: {
      std::vector<int> p(g.ell);
      std::iota(p.begin(), p.end(), g.kappa - g.ell);
      return p;
    }
    case Placement::kPositionP:
      return {spec.position};
    case Placement::kCustom:
      return spec.custom_positions;
  }
  return {};
}

// Items sorted by ascending true utility, ties by index.
std::vector<int> WeakestFirst(const UtilityVector& theta) {
  std::vector<int> order(theta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return theta[x] < theta[y]; });
  return order;
}

double Quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return kNaN;
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * (sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

template <typename Stat>
Interval PercentileBootstrap(std::size_t size, int resamples,
                             std::uint64_t seed, double coverage, Stat stat) {
  if (size == 0) throw InvalidInputError("bootstrap needs data");
  if (resamples < 1) throw InvalidInputError("bootstrap needs resamples");
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw InvalidInputError("coverage must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, size - 1);
  std::vector<std::size_t> idx(size);
  std::vector<double> stats;
  stats.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    for (auto& i : idx) i = pick(rng);
    stats.push_back(stat(idx));
  }
  const double tail = (1.0 - coverage) / 2.0;
  return {Quantile(stats, tail), Quantile(stats, 1.0 - tail)};
}

double Mean(std::span<const double> v) {
  return v.empty() ? kNaN
                   : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

FitResult FitNaiveRandom(const std::vector<PartialOrder>& orders, int d,
                         const FitConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<WeightedPair> pairs;
  for (const PartialOrder& order : orders) {
    std::vector<PairOutcome> all = FullBreakingPairs(order);
    std::size_t budget = 0;
    for (int p : order.positions()) budget += order.kappa() - p;
    budget = std::min(budget, all.size());
    for (std::size_t k = 0; k < budget; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, all.size() - 1);
      std::swap(all[k], all[pick(rng)]);
      pairs.push_back({all[k].winner, all[k].loser, 1.0});
    }
  }
  return MaximizeOnFeasibleSet(PairwiseObjective(d, pairs), config);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream) {
  return SplitMix64(SplitMix64(master) ^ SplitMix64(~stream));
}

std::optional<Placement> ParsePlacement(std::string_view name) {
  if (name == "top-l") return Placement::kTopL;
  if (name == "random-l") return Placement::kRandomL;
  if (name == "random-l-top-half") return Placement::kRandomLTopHalf;
  if (name == "random-l-fixed") return Placement::kRandomLFixed;
  if (name == "bottom-l") return Placement::kBottomL;
  if (name == "position-p") return Placement::kPositionP;
  if (name == "custom") return Placement::kCustom;
  return std::nullopt;
}

std::string_view PlacementName(Placement placement) {
  switch (placement) {
    case Placement::kTopL:
      return "top-l";
    case Placement::kRandomL:
      return "random-l";
    case Placement::kRandomLTopHalf:
      return "random-l-top-half";
    case Placement::kRandomLFixed:
      return "random-l-fixed";
    case Placement::kBottomL:
      return "bottom-l";
    case Placement::kPositionP:
      return "position-p";
    case Placement::kCustom:
      return "custom";
  }
  return "";
}

void ValidateScenario(const ScenarioSpec& spec) {
  if (spec.d < 2) throw InvalidInputError("d must be at least 2");
  if (!(spec.b > 0.0)) throw InvalidInputError("b must be positive");
  if (spec.trials < 1) throw InvalidInputError("trials must be at least 1");
  const std::vector<SampleGroup> groups = GroupsOf(spec);
  for (const SampleGroup& g : groups) CheckPositionsFit(spec, g);
  if (spec.topology && !spec.groups.empty()) {
    throw InvalidInputError("a topology cannot be combined with sample "
                            "groups");
  }
  if (spec.theta_source == ThetaSource::kWorstCase &&
      !(spec.topology == TopologyKind::kChain ||
        spec.topology == TopologyKind::kBarbell)) {
    throw InvalidInputError("worst-case utilities need a chain or barbell "
                            "topology");
  }
  if (spec.theta_source == ThetaSource::kExplicit &&
      spec.explicit_theta.size() != spec.d) {
    throw InvalidInputError("explicit utilities must have d entries");
  }
}

ScenarioData GenerateScenarioData(const ScenarioSpec& spec,
                                  std::uint64_t seed) {
  ValidateScenario(spec);
  const int d = spec.d;

  std::optional<Topology> topology;
  if (spec.topology) {
    topology = GenerateTopology(*spec.topology, d, spec.kappa, spec.n, spec.b,
                                DeriveSeed(seed, kOfferingStream));
  }

  Eigen::VectorXd theta;
  switch (spec.theta_source) {
    case ThetaSource::kUniform: {
      std::mt19937_64 rng(DeriveSeed(seed, kThetaStream));
      std::uniform_real_distribution<double> unif(-spec.b, spec.b);
      Eigen::VectorXd raw(d);
      for (int i = 0; i < d; ++i) raw[i] = unif(rng);
      theta = ProjectFeasible(raw, spec.b).values();
      break;
    }
    case ThetaSource::kWorstCase:
      theta = *topology->worst_case_theta;
      break;
    case ThetaSource::kExplicit:
      theta = spec.explicit_theta;
      break;
  }
  UtilityVector theta_star(theta, spec.b);

  std::mt19937_64 offering_rng(DeriveSeed(seed, kOfferingStream));
  std::mt19937_64 position_rng(DeriveSeed(seed, kPositionStream));
  std::mt19937_64 ranking_rng(DeriveSeed(seed, kRankingStream));

  std::vector<PartialOrder> orders;
  const std::vector<SampleGroup> groups = GroupsOf(spec);
  for (const SampleGroup& g : groups) {
    std::vector<int> fixed;
    if (spec.placement == Placement::kRandomLFixed) {
      fixed = DistinctSorted(g.ell, 1, g.kappa - 1, position_rng);
    }
    std::vector<Offering> offerings;
    if (topology) {
      offerings = topology->offerings;
    } else {
      offerings.reserve(g.count);
      for (int j = 0; j < g.count; ++j) {
        offerings.emplace_back(RandomKSet(d, g.kappa, offering_rng));
      }
    }
    for (const Offering& offering : offerings) {
      const std::vector<int> positions =
          PositionsFor(spec.placement, spec, g, fixed, position_rng);
      const Ranking ranking = SampleRanking(theta_star, offering, ranking_rng);
      orders.push_back(PartialOrderFromRanking(ranking, positions));
    }
  }
  return {std::move(theta_star), std::move(orders)};
}

std::optional<EstimatorKind> ParseEstimatorKind(std::string_view name) {
  if (name == "rank-breaking") return EstimatorKind::kRankBreaking;
  if (name == "full-breaking") return EstimatorKind::kFullBreaking;
  if (name == "mle-topl") return EstimatorKind::kMleTopL;
  if (name == "restricted-bottom") return EstimatorKind::kRestrictedBottomL;
  if (name == "naive-random") return EstimatorKind::kNaiveRandom;
  return std::nullopt;
}

std::string_view EstimatorKindName(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kRankBreaking:
      return "rank-breaking";
    case EstimatorKind::kFullBreaking:
      return "full-breaking";
    case EstimatorKind::kMleTopL:
      return "mle-topl";
    case EstimatorKind::kRestrictedBottomL:
      return "restricted-bottom";
    case EstimatorKind::kNaiveRandom:
      return "naive-random";
  }
  return "";
}

std::optional<WeightKind> ParseWeightKind(std::string_view name) {
  if (name == "optimal") return WeightKind::kOptimal;
  if (name == "uniform") return WeightKind::kUniform;
  if (name == "inverse-kappa") return WeightKind::kInverseKappa;
  return std::nullopt;
}

std::string_view WeightKindName(WeightKind kind) {
  switch (kind) {
    case WeightKind::kOptimal:
      return "optimal";
    case WeightKind::kUniform:
      return "uniform";
    case WeightKind::kInverseKappa:
      return "inverse-kappa";
    case WeightKind::kCustom:
      return "custom";
  }
  return "";
}

double Mse(std::span<const double> estimate, std::span<const double> truth,
           double c) {
  if (estimate.size() != truth.size()) {
    throw InvalidInputError("estimate and truth differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double diff = estimate[i] - truth[i];
    total += diff * diff;
  }
  return c * total;
}

Eigen::VectorXd PerItemAbsError(std::span<const double> estimate,
                                std::span<const double> truth) {
  if (estimate.size() != truth.size()) {
    throw InvalidInputError("estimate and truth differ in length");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(estimate.size()));
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = std::abs(estimate[i] - truth[i]);
  }
  return out;
}

Eigen::VectorXd AlignedTruth(const FitResult& fit,
                             const UtilityVector& theta_star) {
  std::vector<int> slot(fit.num_items, -1);
  for (std::size_t k = 0; k < fit.items.size(); ++k) {
    if (fit.items[k] >= theta_star.size()) {
      throw InvalidInputError("fitted item outside the true utility vector");
    }
    slot[fit.items[k]] = static_cast<int>(k);
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(fit.items.size()));
  for (const auto& group : fit.components.members) {
    double mean = 0.0;
    for (int item : group) mean += theta_star[item];
    mean /= group.size();
    for (int item : group) out[slot[item]] = theta_star[item] - mean;
  }
  return out;
}

std::vector<EstimatorSummary> RunTrials(
    const ScenarioSpec& spec, std::span<const EstimatorSpec> estimators,
    const TrialOptions& options) {
  ValidateScenario(spec);
  std::vector<EstimatorSummary> out;
  for (const EstimatorSpec& e : estimators) {
    EstimatorSummary s;
    s.estimator = e;
    out.push_back(std::move(s));
  }
  FitConfig fit_config = options.fit;
  fit_config.b = spec.b;
  const SampleGroup first = GroupsOf(spec).front();
  const bool bottom = spec.placement == Placement::kBottomL;

  for (int t = 0; t < spec.trials; ++t) {
    const std::uint64_t trial_seed =
        DeriveSeed(spec.seed, static_cast<std::uint64_t>(t));
    const ScenarioData data = GenerateScenarioData(spec, trial_seed);
    const BrokenDataset base(data.orders, spec.d);
    std::vector<int> weakest = WeakestFirst(data.theta_star);
    int restricted = 0;
    if (bottom) {
      restricted = std::max(2, RestrictedSize(first.ell, spec.d, first.kappa));
    }

    for (std::size_t e = 0; e < estimators.size(); ++e) {
      const EstimatorSpec& est = estimators[e];
      const auto start = std::chrono::steady_clock::now();
      std::optional<FitResult> fit;
      try {
        switch (est.kind) {
          case EstimatorKind::kRankBreaking:
            fit = FitRankBreaking(base.WithScheme(est.scheme), fit_config);
            break;
          case EstimatorKind::kFullBreaking:
            fit = FitFullBreaking(data.orders, spec.d, fit_config);
            break;
          case EstimatorKind::kMleTopL: {
            std::vector<TopRanking> tops;
            tops.reserve(data.orders.size());
            for (const PartialOrder& o : data.orders) {
              tops.push_back(ToTopRanking(o));
            }
            fit = FitMleTopL(tops, spec.d, fit_config);
            break;
          }
          case EstimatorKind::kRestrictedBottomL: {
            const int size =
                std::max(2, RestrictedSize(first.ell, spec.d, first.kappa));
            fit = FitRestrictedBottomL(base, weakest, size, fit_config);
            break;
          }
          case EstimatorKind::kNaiveRandom:
            fit = FitNaiveRandom(data.orders, spec.d, fit_config,
                                 DeriveSeed(trial_seed, kNaiveStream));
            break;
        }
      } catch (const Error&) {
        out[e].trials.push_back(std::nullopt);
        ++out[e].failures;
        continue;
      }
      const auto stop = std::chrono::steady_clock::now();

      TrialResult r;
      r.items = fit->items;
      r.theta_hat = fit->theta.values();
      r.converged = fit->converged;
      const Eigen::VectorXd truth = AlignedTruth(*fit, data.theta_star);
      const std::span<const double> est_span(r.theta_hat.data(),
                                             r.theta_hat.size());
      const std::span<const double> truth_span(truth.data(), truth.size());
      r.mse = Mse(est_span, truth_span, options.normalization.c);
      if (options.normalization.per_item) r.mse /= truth.size();
      r.abs_error = PerItemAbsError(est_span, truth_span);
      r.mse_weakest = kNaN;
      if (bottom) {
        std::vector<char> in_weak(spec.d, 0);
        for (int k = 0; k < restricted; ++k) in_weak[weakest[k]] = 1;
        std::vector<double> a;
        std::vector<double> b;
        for (std::size_t k = 0; k < r.items.size(); ++k) {
          if (in_weak[r.items[k]]) {
            a.push_back(r.theta_hat[static_cast<Eigen::Index>(k)]);
            b.push_back(data.theta_star[r.items[k]]);
          }
        }
        if (!a.empty()) {
          const double ma = Mean(a);
          const double mb = Mean(b);
          for (double& x : a) x -= ma;
          for (double& x : b) x -= mb;
          r.mse_weakest = Mse(a, b, options.normalization.c);
          if (options.normalization.per_item) r.mse_weakest /= a.size();
        }
      }
      if (options.measure_runtime) {
        r.runtime_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
      }
      out[e].trials.push_back(std::move(r));
    }
  }

  for (std::size_t e = 0; e < out.size(); ++e) {
    const std::vector<double> mses = SuccessfulMse(out[e]);
    if (mses.empty()) {
      out[e].mean_mse = kNaN;
      out[e].ci = {kNaN, kNaN};
      out[e].mean_mse_weakest = kNaN;
      continue;
    }
    out[e].mean_mse = Mean(mses);
    out[e].ci = BootstrapMeanInterval(
        mses, options.bootstrap_resamples,
        DeriveSeed(spec.seed, 1000000 + static_cast<std::uint64_t>(e)));
    std::vector<double> weak;
    for (const auto& r : out[e].trials) {
      if (r && !std::isnan(r->mse_weakest)) weak.push_back(r->mse_weakest);
    }
    out[e].mean_mse_weakest = weak.empty() ? kNaN : Mean(weak);
  }
  return out;
}

std::vector<double> SuccessfulMse(const EstimatorSummary& summary) {
  std::vector<double> out;
  for (const auto& r : summary.trials) {
    if (r) out.push_back(r->mse);
  }
  return out;
}

Interval BootstrapMeanInterval(std::span<const double> values, int resamples,
                               std::uint64_t seed, double coverage) {
  return PercentileBootstrap(
      values.size(), resamples, seed, coverage,
      [&](const std::vector<std::size_t>& idx) {
        double total = 0.0;
        for (std::size_t i : idx) total += values[i];
        return total / idx.size();
      });
}

Interval BootstrapRatioOfMeans(std::span<const double> numerator,
                               std::span<const double> denominator,
                               int resamples, std::uint64_t seed,
                               double coverage) {
  if (numerator.size() != denominator.size()) {
    throw InvalidInputError("paired bootstrap needs equal lengths");
  }
  return PercentileBootstrap(
      numerator.size(), resamples, seed, coverage,
      [&](const std::vector<std::size_t>& idx) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i : idx) {
          num += numerator[i];
          den += denominator[i];
        }
        return num / den;
      });
}

Interval BootstrapMeanDifference(std::span<const double> a,
                                 std::span<const double> b, int resamples,
                                 std::uint64_t seed, double coverage) {
  if (a.size() != b.size()) {
    throw InvalidInputError("paired bootstrap needs equal lengths");
  }
  return PercentileBootstrap(
      a.size(), resamples, seed, coverage,
      [&](const std::vector<std::size_t>& idx) {
        double total = 0.0;
        for (std::size_t i : idx) total += a[i] - b[i];
        return total / idx.size();
      });
}

int KendallDistance(const Ranking& first, const Ranking& second) {
  const int kappa = first.kappa();
  if (second.kappa() != kappa) {
    throw InvalidInputError("rankings differ in length");
  }
  std::vector<int> sorted_a = first.order();
  std::vector<int> sorted_b = second.order();
  std::sort(sorted_a.begin(), sorted_a.end());
  std::sort(sorted_b.begin(), sorted_b.end());
  if (sorted_a != sorted_b) {
    throw InvalidInputError("rankings cover different items");
  }
  // Position of every item in `second`, read in the order of `first`.
  std::vector<int> rank_in_second;
  rank_in_second.reserve(kappa);
  for (int item : first.order()) {
    const auto it =
        std::find(second.order().begin(), second.order().end(), item);
    rank_in_second.push_back(static_cast<int>(it - second.order().begin()));
  }
  int discordant = 0;
  for (int x = 0; x < kappa; ++x) {
    for (int y = x + 1; y < kappa; ++y) {
      if (rank_in_second[x] > rank_in_second[y]) ++discordant;
    }
  }
  return discordant;
}

double KendallSampleCorrelation(const Ranking& reference,
                                std::span<const Ranking> samples) {
  if (samples.empty()) {
    throw InvalidInputError("correlation needs at least one sample");
  }
  std::unordered_map<int, int> rank;
  for (int k = 0; k < reference.kappa(); ++k) rank[reference.order()[k]] = k;
  double total = 0.0;
  for (const Ranking& s : samples) {
    std::vector<int> restricted = s.order();
    for (int item : restricted) {
      if (!rank.count(item)) {
        throw InvalidInputError("sample ranks an item the reference lacks");
      }
    }
    std::sort(restricted.begin(), restricted.end(),
              [&](int x, int y) { return rank[x] < rank[y]; });
    const int kappa = s.kappa();
    const int k = KendallDistance(Ranking(restricted), s);
    total += 1.0 - 4.0 * k / (kappa * (kappa - 1.0));
  }
  return total / samples.size();
}

BordaResult BordaCount(std::span<const Ranking> rankings, int num_items) {
  BordaResult out;
  out.scores.assign(num_items, 0.0);
  std::vector<char> seen(num_items, 0);
  for (const Ranking& r : rankings) {
    for (int pos = 1; pos <= r.kappa(); ++pos) {
      const int item = r.at(pos);
      if (item < 0 || item >= num_items) {
        throw InvalidInputError("ranking item outside [0, num_items)");
      }
      out.scores[item] += r.kappa() - pos;
      seen[item] = 1;
    }
  }
  for (int i = 0; i < num_items; ++i) {
    if (seen[i]) out.order.push_back(i);
  }
  std::stable_sort(out.order.begin(), out.order.end(), [&](int x, int y) {
    return out.scores[x] > out.scores[y];
  });
  return out;
}

double LogLogSlope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidInputError("slope needs at least two matched points");
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw InvalidInputError("log-log slope needs positive values");
    }
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InvalidInputError("slope needs distinct x values");
  return sxy / sxx;
}

std::optional<ScalingAxis> ParseScalingAxis(std::string_view name) {
  if (name == "n") return ScalingAxis::kN;
  if (name == "ell" || name == "l") return ScalingAxis::kEll;
  if (name == "d") return ScalingAxis::kD;
  return std::nullopt;
}

std::string_view ScalingAxisName(ScalingAxis axis) {
  switch (axis) {
    case ScalingAxis::kN:
      return "n";
    case ScalingAxis::kEll:
      return "ell";
    case ScalingAxis::kD:
      return "d";
  }
  return "";
}

std::vector<std::string> ScalingHeader() {
  return {"scenario_id", "axis",     "axis_value", "estimator", "scheme",
          "trials",      "mean_mse", "ci_low",     "ci_high",   "alpha",
          "beta",        "gamma",    "eta",        "runtime_ms"};
}

std::vector<ScalingRow> ScalingTable(ScalingAxis axis,
                                     std::span<const int> axis_values,
                                     const ScenarioSpec& base,
                                     std::span<const EstimatorSpec> estimators,
                                     const TrialOptions& options,
                                     std::string_view scenario_id) {
  if (axis_values.empty()) throw InvalidInputError("empty scaling grid");
  if (estimators.empty()) throw InvalidInputError("no estimator requested");
  std::vector<ScalingRow> rows;
  for (int value : axis_values) {
    ScenarioSpec spec = base;
    switch (axis) {
      case ScalingAxis::kN:
        spec.n = value;
        break;
      case ScalingAxis::kEll:
        spec.ell = value;
        break;
      case ScalingAxis::kD:
        spec.d = value;
        break;
    }
    const std::vector<EstimatorSummary> summaries =
        RunTrials(spec, estimators, options);
    const ScenarioData first =
        GenerateScenarioData(spec, DeriveSeed(spec.seed, 0));
    const BrokenDataset dataset(first.orders, spec.d);
    for (std::size_t e = 0; e < estimators.size(); ++e) {
      const EstimatorSpec& est = estimators[e];
      const bool weighted = est.kind == EstimatorKind::kRankBreaking;
      const Diagnostics diag = Diagnose(
          weighted ? dataset.WithScheme(est.scheme) : dataset, spec.b);
      ScalingRow row;
      row.scenario_id = std::string(scenario_id);
      row.axis = std::string(ScalingAxisName(axis));
      row.axis_value = value;
      row.estimator = std::string(EstimatorKindName(est.kind));
      switch (est.kind) {
        case EstimatorKind::kRankBreaking:
          row.scheme = std::string(WeightKindName(est.scheme.kind));
          break;
        case EstimatorKind::kMleTopL:
          row.scheme = "none";
          break;
        default:
          row.scheme = "uniform";
          break;
      }
      const EstimatorSummary& s = summaries[e];
      row.trials = static_cast<int>(s.trials.size()) - s.failures;
      row.mean_mse = s.mean_mse;
      row.ci_low = s.ci.low;
      row.ci_high = s.ci.high;
      row.alpha = diag.alpha;
      row.beta = diag.beta;
      row.gamma = diag.gamma;
      row.eta = diag.eta;
      double runtime = 0.0;
      int count = 0;
      for (const auto& r : s.trials) {
        if (r) {
          runtime += r->runtime_ms;
          ++count;
        }
      }
      row.runtime_ms = count ? runtime / count : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace rankbreak
