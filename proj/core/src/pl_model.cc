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

#include "rankbreak/pl_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>

#include "rankbreak/errors.h"

namespace rankbreak {
namespace {

void CheckItemsIndexed(std::span<const int> items, int d) {
  for (int item : items) {
    if (item < 0 || item >= d) {
      throw InvalidInputError("item " + std::to_string(item) +
                              " is not indexed by a utility vector of size " +
                              std::to_string(d));
    }
  }
}

void CheckDistinct(std::span<const int> items, const char* what) {
  std::unordered_set<int> seen;
  for (int item : items) {
    if (!seen.insert(item).second) {
      throw InvalidInputError(std::string(what) + " repeats item " +
                              std::to_string(item));
    }
  }
}

// sum_i clamp(x_i + shift, -b, b)
double ClampedSum(const Eigen::VectorXd& x, double shift, double b) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sum += std::clamp(x[i] + shift, -b, b);
  }
  return sum;
}

}  // namespace

int ItemIndex::Intern(std::string_view id) {
  auto it = lookup_.find(std::string(id));
  if (it != lookup_.end()) return it->second;
  const int index = size();
  names_.emplace_back(id);
  lookup_.emplace(names_.back(), index);
  return index;
}

int ItemIndex::Find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  return it == lookup_.end() ? -1 : it->second;
}

ItemIndex ItemIndex::Numeric(int num_items) {
  ItemIndex index;
  for (int i = 0; i < num_items; ++i) index.Intern(std::to_string(i));
  return index;
}

UtilityVector::UtilityVector(Eigen::VectorXd values, double b)
    : values_(std::move(values)), b_(b) {
  if (!(b_ > 0.0)) throw InvalidInputError("dynamic range b must be positive");
  if (values_.size() == 0) {
    throw InvalidInputError("utility vector must be nonempty");
  }
  if (!values_.allFinite()) {
    throw InvalidInputError("utility vector has non-finite entries");
  }
  if (std::abs(values_.sum()) > kSumTolerance) {
    throw InvalidInputError("utilities must sum to zero");
  }
  if (values_.cwiseAbs().maxCoeff() > b_ + kBoxTolerance) {
    throw InvalidInputError("utility outside [-b, b]");
  }
}

UtilityVector ProjectFeasible(const Eigen::VectorXd& raw, double b) {
  if (raw.size() == 0) throw InvalidInputError("cannot project empty vector");
  if (!(b > 0.0)) throw InvalidInputError("dynamic range b must be positive");
  if (!raw.allFinite()) throw InvalidInputError("non-finite utility");

  const Eigen::Index d = raw.size();
  std::vector<double> breaks;
  breaks.reserve(2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    breaks.push_back(-b - raw[i]);
    breaks.push_back(b - raw[i]);
  }
  std::sort(breaks.begin(), breaks.end());

  // The clamped sum is nondecreasing in the shift and runs from -d*b at the
  // first breakpoint to d*b at the last; bracket its root between two
  // consecutive breakpoints and solve the linear piece.
  std::size_t lo = 0;
  std::size_t hi = breaks.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ClampedSum(raw, breaks[mid], b) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double f_lo = ClampedSum(raw, breaks[lo], b);
  const double f_hi = ClampedSum(raw, breaks[hi], b);
  double shift = breaks[lo];
  if (f_hi > f_lo && breaks[hi] > breaks[lo]) {
    shift = breaks[lo] - f_lo * (breaks[hi] - breaks[lo]) / (f_hi - f_lo);
  }

  Eigen::VectorXd out(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out[i] = std::clamp(raw[i] + shift, -b, b);
  }
  // Spread the rounding residue over coordinates strictly inside the box.
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(out[i]) < b) free.push_back(i);
  }
  const double residue = out.sum();
  if (!free.empty() && residue != 0.0) {
    const double per = residue / static_cast<double>(free.size());
    for (Eigen::Index i : free) out[i] = std::clamp(out[i] - per, -b, b);
  }
  return UtilityVector(std::move(out), b);
}

Offering::Offering(std::vector<int> items) : items_(std::move(items)) {
  if (items_.size() < 2) {
    throw InvalidInputError("an offering needs at least two items");
  }
  CheckDistinct(items_, "offering");
}

Ranking::Ranking(std::vector<int> order) : order_(std::move(order)) {
  if (order_.size() < 2) {
    throw InvalidInputError("a ranking needs at least two items");
  }
  CheckDistinct(order_, "ranking");
}

double LogSumExp(const Eigen::VectorXd& theta, std::span<const int> items) {
  double max_value = -std::numeric_limits<double>::infinity();
  for (int item : items) max_value = std::max(max_value, theta[item]);
  double sum = 0.0;
  for (int item : items) sum += std::exp(theta[item] - max_value);
  return max_value + std::log(sum);
}

double PlRankingLogProbability(const UtilityVector& theta,
                               const Ranking& ranking) {
  const std::vector<int>& order = ranking.order();
  CheckItemsIndexed(order, theta.size());
  double log_prob = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const std::span<const int> rest(order.data() + i, order.size() - i);
    log_prob += theta[order[i]] - LogSumExp(theta.values(), rest);
  }
  return log_prob;
}

double PlRankingProbability(const UtilityVector& theta,
                            const Ranking& ranking) {
  return std::exp(PlRankingLogProbability(theta, ranking));
}

Ranking SampleRanking(const UtilityVector& theta, const Offering& offering,
                      std::mt19937_64& rng) {
  const std::vector<int>& items = offering.items();
  CheckItemsIndexed(items, theta.size());
  std::exponential_distribution<double> unit_exponential(1.0);
  // Clock of item i is E_i * exp(-theta_i); compare on the log scale.
  std::vector<std::pair<double, int>> clocks;
  clocks.reserve(items.size());
  for (int item : items) {
    clocks.emplace_back(std::log(unit_exponential(rng)) - theta[item], item);
  }
  std::sort(clocks.begin(), clocks.end());
  std::vector<int> order;
  order.reserve(items.size());
  for (const auto& [clock, item] : clocks) order.push_back(item);
  return Ranking(std::move(order));
}

Ranking SampleRanking(const UtilityVector& theta, const Offering& offering,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return SampleRanking(theta, offering, rng);
}

double PlTopLogLikelihood(const UtilityVector& theta,
                          std::span<const TopRanking> data) {
  double total = 0.0;
  for (const TopRanking& sample : data) {
    const std::vector<int>& order = sample.ranking.order();
    const int kappa = sample.ranking.kappa();
    if (sample.top < 1 || sample.top > kappa - 1) {
      throw InvalidInputError("revealed prefix length " +
                              std::to_string(sample.top) +
                              " outside [1, kappa-1]");
    }
    CheckItemsIndexed(order, theta.size());
    for (int m = 0; m < sample.top; ++m) {
      const std::span<const int> rest(order.data() + m, order.size() - m);
      total += theta[order[m]] - LogSumExp(theta.values(), rest);
    }
  }
  return total;
}

}  // namespace rankbreak
