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

#ifndef RANKBREAK_TESTS_TESTING_ORACLES_H_
#define RANKBREAK_TESTS_TESTING_ORACLES_H_

// Reference computations written independently of the library: brute-force
// enumeration, plain products, finite differences and a slow projection.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace rankbreak::testing {

// Every ordering of `items`, in lexicographic order of the sorted input.
inline std::vector<std::vector<int>> AllOrders(std::vector<int> items) {
  std::sort(items.begin(), items.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(items);
  } while (std::next_permutation(items.begin(), items.end()));
  return out;
}

// Sequential-choice probability as a plain product of ratios of exponentials.
inline double DirectRankingProbability(const Eigen::VectorXd& theta,
                                       const std::vector<int>& order) {
  double prob = 1.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    double denom = 0.0;
    for (std::size_t k = i; k < order.size(); ++k) {
      denom += std::exp(theta[order[k]]);
    }
    prob *= std::exp(theta[order[i]]) / denom;
  }
  return prob;
}

// Gumbel-perturbed utilities sorted in decreasing order.
inline std::vector<int> GumbelSample(const Eigen::VectorXd& theta,
                                     std::vector<int> items,
                                     std::mt19937_64& rng) {
  std::extreme_value_distribution<double> gumbel(0.0, 1.0);
  std::vector<std::pair<double, int>> keyed;
  for (int item : items) keyed.emplace_back(theta[item] + gumbel(rng), item);
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; k < items.size(); ++k) items[k] = keyed[k].second;
  return items;
}

// Alternating mean subtraction and clamping until the change stalls.
inline Eigen::VectorXd AlternatingProjection(Eigen::VectorXd x, double b,
                                             int max_rounds = 100000,
                                             double tol = 1e-15) {
  for (int round = 0; round < max_rounds; ++round) {
    const Eigen::VectorXd before = x;
    x.array() -= x.mean();
    x = x.cwiseMax(-b).cwiseMin(b);
    if ((x - before).cwiseAbs().maxCoeff() < tol) break;
  }
  return x;
}

inline Eigen::VectorXd CentralDifferenceGradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd up = x;
    Eigen::VectorXd down = x;
    up[i] += h;
    down[i] -= h;
    g[i] = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd CentralDifferenceJacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
  Eigen::MatrixXd jac(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd up = x;
    Eigen::VectorXd down = x;
    up[i] += h;
    down[i] -= h;
    jac.col(i) = (f(up) - f(down)) / (2.0 * h);
  }
  return jac;
}

}  // namespace rankbreak::testing

#endif  // RANKBREAK_TESTS_TESTING_ORACLES_H_
