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

#include "rankbreak/objective.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include <Eigen/LU>

#include "rankbreak/errors.h"

namespace rankbreak {
namespace {

constexpr double kNegativeInfinity = -std::numeric_limits<double>::infinity();

// log(1 / (1 + exp(-x)))
double LogSigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::unordered_map<int, int> LocalIndex(std::span<const int> items) {
  std::unordered_map<int, int> local;
  for (std::size_t k = 0; k < items.size(); ++k) {
    local.emplace(items[k], static_cast<int>(k));
  }
  return local;
}

// Union-find over item indices.
class Components {
 public:
  explicit Components(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void Join(int x, int y) {
    x = Find(x);
    y = Find(y);
    if (x != y) parent_[std::max(x, y)] = std::min(x, y);
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

PairwiseObjective::PairwiseObjective(int num_items,
                                     std::span<const WeightedPair> pairs)
    : num_items_(num_items) {
  if (num_items < 0) throw InvalidInputError("negative item count");
  std::map<std::pair<int, int>, Link> merged;
  for (const WeightedPair& p : pairs) {
    if (p.winner < 0 || p.winner >= num_items || p.loser < 0 ||
        p.loser >= num_items) {
      throw InvalidInputError("pair references item outside [0, d)");
    }
    if (p.winner == p.loser) throw InvalidInputError("item paired with itself");
    if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) {
      throw InvalidInputError("pair weights must be finite and nonnegative");
    }
    const int i = std::min(p.winner, p.loser);
    const int j = std::max(p.winner, p.loser);
    Link& link = merged.try_emplace({i, j}, Link{i, j, 0.0, 0.0}).first->second;
    (p.winner == i ? link.forward : link.backward) += p.weight;
  }
  links_.reserve(merged.size());
  for (const auto& [key, link] : merged) {
    if (link.forward + link.backward > 0.0) links_.push_back(link);
  }
}

PairwiseObjective::PairwiseObjective(int num_items, std::vector<Link> links)
    : num_items_(num_items), links_(std::move(links)) {}

double PairwiseObjective::Value(const Eigen::VectorXd& theta) const {
  double value = 0.0;
  for (const Link& l : links_) {
    const double diff = theta[l.i] - theta[l.j];
    if (l.forward > 0.0) value += l.forward * LogSigmoid(diff);
    if (l.backward > 0.0) value += l.backward * LogSigmoid(-diff);
  }
  return value;
}

Eigen::VectorXd PairwiseObjective::Gradient(
    const Eigen::VectorXd& theta) const {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(num_items_);
  for (const Link& l : links_) {
    const double s = Sigmoid(theta[l.i] - theta[l.j]);
    const double g = l.forward * (1.0 - s) - l.backward * s;
    grad[l.i] += g;
    grad[l.j] -= g;
  }
  return grad;
}

Eigen::MatrixXd PairwiseObjective::Hessian(
    const Eigen::VectorXd& theta) const {
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(num_items_, num_items_);
  for (const Link& l : links_) {
    const double s = Sigmoid(theta[l.i] - theta[l.j]);
    const double c = (l.forward + l.backward) * s * (1.0 - s);
    hess(l.i, l.i) -= c;
    hess(l.j, l.j) -= c;
    hess(l.i, l.j) += c;
    hess(l.j, l.i) += c;
  }
  return hess;
}

std::vector<std::pair<int, int>> PairwiseObjective::InteractionEdges() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(links_.size());
  for (const Link& l : links_) edges.emplace_back(l.i, l.j);
  return edges;
}

std::unique_ptr<ConcaveObjective> PairwiseObjective::Restrict(
    std::span<const int> items) const {
  const auto local = LocalIndex(items);
  std::vector<Link> kept;
  for (const Link& l : links_) {
    auto i = local.find(l.i);
    auto j = local.find(l.j);
    if (i == local.end() || j == local.end()) continue;
    // Local order follows `items`, which is ascending in every caller.
    Link r{i->second, j->second, l.forward, l.backward};
    if (r.i > r.j) {
      std::swap(r.i, r.j);
      std::swap(r.forward, r.backward);
    }
    kept.push_back(r);
  }
  return std::unique_ptr<ConcaveObjective>(
      new PairwiseObjective(static_cast<int>(items.size()), std::move(kept)));
}

std::optional<Eigen::VectorXd> PairwiseObjective::MinorizationStep(
    const Eigen::VectorXd& theta) const {
  Eigen::VectorXd wins = Eigen::VectorXd::Zero(num_items_);
  Eigen::VectorXd denom = Eigen::VectorXd::Zero(num_items_);
  for (const Link& l : links_) {
    const double n = l.forward + l.backward;
    const double s = Sigmoid(theta[l.i] - theta[l.j]);
    wins[l.i] += l.forward;
    wins[l.j] += l.backward;
    denom[l.i] += n * s;
    denom[l.j] += n * (1.0 - s);
  }
  Eigen::VectorXd next(num_items_);
  for (int i = 0; i < num_items_; ++i) {
    if (denom[i] <= 0.0) {
      next[i] = theta[i];
    } else if (wins[i] <= 0.0) {
      next[i] = kNegativeInfinity;
    } else {
      next[i] = std::log(wins[i]) + theta[i] - std::log(denom[i]);
    }
  }
  return next;
}

PlTopObjective::PlTopObjective(int num_items, std::vector<TopRanking> samples)
    : num_items_(num_items), samples_(std::move(samples)) {
  for (const TopRanking& s : samples_) {
    if (s.top < 1 || s.top > s.ranking.kappa() - 1) {
      throw InvalidInputError("revealed prefix length outside [1, kappa-1]");
    }
    for (int item : s.ranking.order()) {
      if (item < 0 || item >= num_items) {
        throw InvalidInputError("ranking references item outside [0, d)");
      }
    }
  }
}

double PlTopObjective::Value(const Eigen::VectorXd& theta) const {
  double value = 0.0;
  for (const TopRanking& s : samples_) {
    const std::vector<int>& order = s.ranking.order();
    for (int m = 0; m < s.top; ++m) {
      const std::span<const int> rest(order.data() + m, order.size() - m);
      value += theta[order[m]] - LogSumExp(theta, rest);
    }
  }
  return value;
}

Eigen::VectorXd PlTopObjective::Gradient(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(num_items_);
  for (const TopRanking& s : samples_) {
    const std::vector<int>& order = s.ranking.order();
    for (int m = 0; m < s.top; ++m) {
      const std::span<const int> rest(order.data() + m, order.size() - m);
      const double lse = LogSumExp(theta, rest);
      grad[order[m]] += 1.0;
      for (int item : rest) grad[item] -= std::exp(theta[item] - lse);
    }
  }
  return grad;
}

Eigen::MatrixXd PlTopObjective::Hessian(const Eigen::VectorXd& theta) const {
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(num_items_, num_items_);
  std::vector<double> prob;
  for (const TopRanking& s : samples_) {
    const std::vector<int>& order = s.ranking.order();
    for (int m = 0; m < s.top; ++m) {
      const std::span<const int> rest(order.data() + m, order.size() - m);
      const double lse = LogSumExp(theta, rest);
      prob.clear();
      for (int item : rest) prob.push_back(std::exp(theta[item] - lse));
      for (std::size_t x = 0; x < rest.size(); ++x) {
        hess(rest[x], rest[x]) -= prob[x];
        for (std::size_t y = 0; y < rest.size(); ++y) {
          hess(rest[x], rest[y]) += prob[x] * prob[y];
        }
      }
    }
  }
  return hess;
}

std::vector<std::pair<int, int>> PlTopObjective::InteractionEdges() const {
  std::vector<std::pair<int, int>> edges;
  for (const TopRanking& s : samples_) {
    const std::vector<int>& order = s.ranking.order();
    for (std::size_t k = 1; k < order.size(); ++k) {
      edges.emplace_back(order[k - 1], order[k]);
    }
  }
  return edges;
}

std::unique_ptr<ConcaveObjective> PlTopObjective::Restrict(
    std::span<const int> items) const {
  const auto local = LocalIndex(items);
  std::vector<TopRanking> kept;
  for (const TopRanking& s : samples_) {
    if (!local.contains(s.ranking.order().front())) continue;
    std::vector<int> order;
    order.reserve(s.ranking.order().size());
    for (int item : s.ranking.order()) order.push_back(local.at(item));
    kept.push_back({Ranking(std::move(order)), s.top});
  }
  return std::make_unique<PlTopObjective>(static_cast<int>(items.size()),
                                          std::move(kept));
}

Eigen::VectorXd FitResult::Expanded(double fill) const {
  Eigen::VectorXd full = Eigen::VectorXd::Constant(num_items, fill);
  for (std::size_t k = 0; k < items.size(); ++k) full[items[k]] = theta[k];
  return full;
}

double ProjectedGradientNorm(const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& gradient, double b) {
  return (ProjectFeasible(theta + gradient, b).values() - theta)
      .lpNorm<Eigen::Infinity>();
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

// Objective values below this difference are indistinguishable from rounding.
double Noise(double value) {
  return 64.0 * std::numeric_limits<double>::epsilon() *
         (1.0 + std::abs(value));
}

// g . delta for a zero-sum delta. Subtracting the mean gradient over the
// moving coordinates leaves the exact value unchanged and avoids cancelling a
// large common component against the rounding residue of sum(delta).
double ZeroSumDot(const Eigen::VectorXd& gradient,
                  const Eigen::VectorXd& delta) {
  double mean = 0.0;
  int moving = 0;
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    if (delta[i] != 0.0) {
      mean += gradient[i];
      ++moving;
    }
  }
  if (moving == 0) return 0.0;
  mean /= moving;
  return (gradient.array() - mean).matrix().dot(delta);
}

struct Iterate {
  Eigen::VectorXd theta;
  double value;
};

// Backtracking along the projection arc theta -> P(theta + t * direction).
std::optional<Iterate> ArcSearch(const ConcaveObjective& objective,
                                 const Iterate& current,
                                 const Eigen::VectorXd& gradient,
                                 const Eigen::VectorXd& direction, double b) {
  const double noise = Noise(current.value);
  double step = 1.0;
  for (int k = 0; k < kMaxHalvings; ++k, step *= 0.5) {
    Eigen::VectorXd candidate =
        ProjectFeasible(current.theta + step * direction, b).values();
    const Eigen::VectorXd delta = candidate - current.theta;
    if (delta.lpNorm<Eigen::Infinity>() == 0.0) return std::nullopt;
    const double value = objective.Value(candidate);
    const double predicted = kArmijo * ZeroSumDot(gradient, delta);
    if (std::abs(value - current.value) > noise) {
      if (value >= current.value + predicted) {
        return Iterate{std::move(candidate), value};
      }
      continue;
    }
    // Near the optimum the value difference drowns in rounding. Concavity
    // gives f(candidate) - f(current) >= g(candidate) . delta, which has no
    // cancellation.
    if (ZeroSumDot(objective.Gradient(candidate), delta) >= predicted) {
      return Iterate{std::move(candidate), value};
    }
  }
  return std::nullopt;
}

// Newton direction restricted to the coordinates not pinned at the box, with
// the zero-sum constraint enforced through a bordered system.
std::optional<Eigen::VectorXd> NewtonDirection(
    const ConcaveObjective& objective, const Eigen::VectorXd& theta,
    const Eigen::VectorXd& gradient, double b) {
  const int d = static_cast<int>(theta.size());
  // Coordinates this close to the box and pushed outward are held fixed. The
  // band shrinks with the projected gradient so the optimum is still found.
  const double edge =
      std::max(1e-10 * std::max(1.0, b),
               std::min(0.1 * b, ProjectedGradientNorm(theta, gradient, b)));
  std::vector<bool> pinned(d, false);
  for (int pass = 0; pass < 32; ++pass) {
    double sum = 0.0;
    int free = 0;
    for (int i = 0; i < d; ++i) {
      if (!pinned[i]) {
        sum += gradient[i];
        ++free;
      }
    }
    if (free == 0) return std::nullopt;
    const double mu = sum / free;
    bool changed = false;
    for (int i = 0; i < d; ++i) {
      const bool pin = (theta[i] >= b - edge && gradient[i] > mu) ||
                       (theta[i] <= -b + edge && gradient[i] < mu);
      if (pin != pinned[i]) {
        pinned[i] = pin;
        changed = true;
      }
    }
    if (!changed) break;
  }
  const Eigen::MatrixXd hess = objective.Hessian(theta);
  // A free coordinate on the box whose Newton move points outward would be
  // bent by the projection, which can leave no ascent along the arc. Such
  // coordinates join the pinned set and the block is solved again.
  for (int round = 0; round < d; ++round) {
    std::vector<int> free_items;
    for (int i = 0; i < d; ++i) {
      if (!pinned[i]) free_items.push_back(i);
    }
    const int m = static_cast<int>(free_items.size());
    if (m < 2) return std::nullopt;

    // Pinned coordinates step onto the bound; the free block takes the
    // Newton step of the quadratic model given that move, summing to the
    // opposite.
    Eigen::VectorXd direction = Eigen::VectorXd::Zero(d);
    double pinned_sum = 0.0;
    for (int i = 0; i < d; ++i) {
      if (pinned[i]) {
        direction[i] = (theta[i] > 0.0 ? b : -b) - theta[i];
        pinned_sum += direction[i];
      }
    }
    const Eigen::VectorXd coupling = hess * direction;
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    double scale = 0.0;
    for (int x = 0; x < m; ++x) {
      for (int y = 0; y < m; ++y) {
        system(x, y) = -hess(free_items[x], free_items[y]);
      }
      scale = std::max(scale, system(x, x));
      system(x, m) = 1.0;
      system(m, x) = 1.0;
      rhs[x] = gradient[free_items[x]] + coupling[free_items[x]];
    }
    rhs[m] = -pinned_sum;
    for (int x = 0; x < m; ++x) system(x, x) += 1e-12 * (1.0 + scale);
    const Eigen::VectorXd solution = system.partialPivLu().solve(rhs);
    if (!solution.allFinite()) return std::nullopt;
    bool outward = false;
    for (int x = 0; x < m; ++x) {
      const int i = free_items[x];
      direction[i] = solution[x];
      if ((theta[i] >= b - edge && direction[i] > 0.0) ||
          (theta[i] <= -b + edge && direction[i] < 0.0)) {
        pinned[i] = true;
        outward = true;
      }
    }
    if (outward) continue;
    if (ZeroSumDot(gradient, direction) <= 0.0) return std::nullopt;
    return direction;
  }
  return std::nullopt;
}

struct ComponentFit {
  Eigen::VectorXd theta;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<double> trace;
};

ComponentFit MaximizeComponent(const ConcaveObjective& objective,
                               const FitConfig& config, int iteration_budget) {
  const int d = objective.dimension();
  const double b = config.b;
  Iterate current{Eigen::VectorXd::Zero(d), 0.0};
  current.value = objective.Value(current.theta);
  ComponentFit fit;
  fit.trace.push_back(current.value);

  for (;;) {
    const Eigen::VectorXd gradient = objective.Gradient(current.theta);
    fit.gradient_norm = ProjectedGradientNorm(current.theta, gradient, b);
    if (fit.gradient_norm <= config.tolerance) {
      fit.converged = true;
      break;
    }
    if (fit.iterations >= iteration_budget) break;

    std::optional<Iterate> next;
    switch (config.method) {
      case FitMethod::kProjectedNewton:
        if (auto direction =
                NewtonDirection(objective, current.theta, gradient, b)) {
          next = ArcSearch(objective, current, gradient, *direction, b);
        }
        // No measurable gain: let the gradient arc compete.
        if (next && next->value <= current.value) {
          std::optional<Iterate> steepest =
              ArcSearch(objective, current, gradient, gradient, b);
          if (steepest && steepest->value > next->value) next = steepest;
        }
        break;
      case FitMethod::kMinorizationMaximization: {
        std::optional<Eigen::VectorXd> raw =
            objective.MinorizationStep(current.theta);
        if (!raw) {
          throw InvalidInputError(
              "minorization-maximization needs a pairwise objective");
        }
        // Items that never win are sent to the lower edge of the box.
        for (Eigen::Index i = 0; i < raw->size(); ++i) {
          if (!std::isfinite((*raw)[i])) (*raw)[i] = current.theta[i] - 4 * b;
        }
        Eigen::VectorXd candidate = ProjectFeasible(*raw, b).values();
        const double value = objective.Value(candidate);
        if (value >= current.value) {
          next = Iterate{std::move(candidate), value};
        }
        break;
      }
      case FitMethod::kProjectedGradient:
        break;
    }
    if (!next) next = ArcSearch(objective, current, gradient, gradient, b);
    if (!next) break;  // no representable ascent left

    current = std::move(*next);
    ++fit.iterations;
    fit.trace.push_back(current.value);
  }
  fit.theta = std::move(current.theta);
  return fit;
}

}  // namespace

FitResult MaximizeOnFeasibleSet(const ConcaveObjective& objective,
                                const FitConfig& config) {
  if (!(config.b > 0.0)) throw InvalidInputError("b must be positive");
  if (!(config.tolerance > 0.0)) {
    throw InvalidInputError("tolerance must be positive");
  }
  if (config.max_iterations < 0) {
    throw InvalidInputError("max_iterations must be nonnegative");
  }
  const int d = objective.dimension();
  Components uf(d);
  std::vector<bool> involved(d, false);
  for (const auto& [i, j] : objective.InteractionEdges()) {
    uf.Join(i, j);
    involved[i] = involved[j] = true;
  }
  std::map<int, std::vector<int>> groups;
  std::vector<int> dropped;
  for (int i = 0; i < d; ++i) {
    if (involved[i]) {
      groups[uf.Find(i)].push_back(i);
    } else {
      dropped.push_back(i);
    }
  }
  if (groups.empty()) {
    throw EstimationInfeasibleError(
        "no item takes part in any comparison; nothing to estimate");
  }

  std::vector<int> items;
  ComponentReport report;
  for (const auto& [root, members] : groups) {
    items.insert(items.end(), members.begin(), members.end());
    report.members.push_back(members);
  }
  std::sort(items.begin(), items.end());
  report.count = static_cast<int>(report.members.size());
  report.disconnected = report.count > 1;
  const auto position = LocalIndex(items);

  // Components are fitted one after another; the reported trace is the total
  // objective, with untouched components still at their starting value.
  std::vector<std::unique_ptr<ConcaveObjective>> parts;
  double total = 0.0;
  for (const auto& members : report.members) {
    parts.push_back(objective.Restrict(members));
    total += parts.back()->Value(
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(members.size())));
  }

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(items.size()));
  std::vector<double> trace{total};
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = true;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    const ComponentFit fit = MaximizeComponent(
        *parts[c], config, std::max(0, config.max_iterations - iterations));
    for (std::size_t t = 1; t < fit.trace.size(); ++t) {
      trace.push_back(total + fit.trace[t] - fit.trace.front());
    }
    total += fit.trace.back() - fit.trace.front();
    iterations += fit.iterations;
    gradient_norm = std::max(gradient_norm, fit.gradient_norm);
    converged = converged && fit.converged;
    const auto& members = report.members[c];
    for (std::size_t k = 0; k < members.size(); ++k) {
      theta[position.at(members[k])] = fit.theta[static_cast<Eigen::Index>(k)];
    }
  }

  FitResult result{d,
                   std::move(items),
                   UtilityVector(std::move(theta), config.b),
                   iterations,
                   gradient_norm,
                   converged,
                   std::move(trace),
                   std::move(report),
                   std::move(dropped)};
  return result;
}

}  // namespace rankbreak
