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

#ifndef RANKBREAK_GRAPH_METRICS_H_
#define RANKBREAK_GRAPH_METRICS_H_

// Comparison graph of a design, its spectral diagnostics, the sample-size
// conditions and error bounds that consume them, and design generators.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rankbreak/estimator.h"
#include "rankbreak/pl_model.h"

namespace rankbreak {

// Weighted item graph. Every offering S_j adds w_j / (kappa_j (kappa_j - 1))
// to each pair inside it, where w_j = tau_j * l_j.
class ComparisonGraph {
 public:
  // Builds the graph from offerings and their per-offering mass w_j.
  ComparisonGraph(int num_items, std::span<const Offering> offerings,
                  std::span<const double> masses);
  // Takes a symmetric nonnegative adjacency with zero diagonal.
  explicit ComparisonGraph(Eigen::MatrixXd adjacency);

  int num_items() const { return static_cast<int>(adjacency_.rows()); }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  Eigen::VectorXd degree() const { return adjacency_.rowwise().sum(); }
  Eigen::MatrixXd Laplacian() const;
  double Trace() const { return adjacency_.sum(); }
  double MaxDegree() const;

 private:
  Eigen::MatrixXd adjacency_;
};

// Uses the dataset's own weights through tau_j.
ComparisonGraph BuildComparisonGraph(const BrokenDataset& dataset);

// Ascending eigenvalues lambda_2..lambda_d of a Laplacian, found after moving
// the all-ones direction out of the way.
Eigen::VectorXd NontrivialSpectrum(const Eigen::MatrixXd& laplacian);
double Lambda2(const Eigen::MatrixXd& laplacian);

// lambda_2 (d - 1) / Tr(L). Throws InvalidInputError when Tr(L) = 0.
double Alpha(const ComparisonGraph& graph);
// Tr(L) / (d D_max). Throws InvalidInputError when Tr(L) = 0.
double Beta(const ComparisonGraph& graph);

// min_j (1 - p_{j,l_j} / kappa_j)^(ceil(2 e^{2b}) - 2).
double Gamma(const BrokenDataset& dataset, double b);
// kappa_j / max(l_j, kappa_j - p_{j,l_j}) for one sample, and the max over j.
double EtaOf(const BrokenSample& sample);
double Eta(const BrokenDataset& dataset);

struct GeneralWeightDiagnostics {
  double tau = 0.0;
  std::vector<double> tau_j;
  std::vector<double> delta_1;
  std::vector<double> delta_2;
  double delta = 0.0;
};
GeneralWeightDiagnostics ComputeGeneralWeightDiagnostics(
    const BrokenDataset& dataset);

// (1/4) (1 - exp(-2 / (9 (kappa - 2)))), kappa >= 3.
double Chi(int kappa);

struct Diagnostics {
  int num_items = 0;
  int num_samples = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  // Zero when kappa_max < 3.
  double chi = 0.0;
  double d_max = 0.0;
  int ell_max = 0;
  int kappa_max = 0;
  double effective_sample_size = 0.0;  // sum_j l_j
  double lambda2 = 0.0;
  double trace = 0.0;
  // sum_{j,a} lambda (kappa - p) and sum_{j,a} lambda^2 (kappa - p)(kappa-p+1)
  double weighted_pairs = 0.0;
  double weighted_squares = 0.0;
};

// Throws InvalidInputError on an empty dataset or b < 0.
Diagnostics Diagnose(const BrokenDataset& dataset, double b);

enum class BoundRegime {
  kGeneralOptimal,
  kGeneralCustom,
  kTopL,
  kBottomL,
};

// Accepts general-optimal, general-custom, top-l and bottom-l.
std::optional<BoundRegime> ParseBoundRegime(std::string_view name);
std::string_view BoundRegimeName(BoundRegime regime);

struct SampleComplexity {
  double required = 0.0;
  double actual = 0.0;
  bool satisfied = false;
  // Set when the design cannot satisfy the condition at any size.
  bool infeasible = false;
};

// Natural logarithms throughout. For general-custom the compared quantity is
// sum lambda (kappa - p); otherwise it is sum_j l_j.
SampleComplexity CheckSampleComplexity(const Diagnostics& diag, int d,
                                       double b,
                                       BoundRegime regime =
                                           BoundRegime::kGeneralOptimal);

// Right-hand side of the regime's bound on ||theta_hat - theta*|| / sqrt(d).
// Infinite for a disconnected design.
double TheoreticalErrorBound(const Diagnostics& diag, int d, double b,
                             BoundRegime regime);

struct CramerRaoBound {
  double bound = 0.0;         // multiplier * sum_{i>=2} 1 / lambda_i(L)
  // (d-1)^2 / Tr(L); scaled by the multiplier for position-p, unscaled for
  // top-l.
  double jensen_floor = 0.0;
  bool infinite = false;
};

// Position-p lower bound with multiplier 1 / (2 p log(kappa_max)^2).
CramerRaoBound CramerRaoPositionP(const Eigen::MatrixXd& laplacian, int p,
                                  int kappa_max);
// (d - 1)^2 / (2 p n log(kappa_max)^2).
double CramerRaoPositionPFloor(int d, double n, int p, int kappa_max);

// Top-l lower bound. The floor is (d - 1)^2 / Tr(L) with no multiplier.
CramerRaoBound CramerRaoTopL(const Eigen::MatrixXd& laplacian, int ell_max,
                             int kappa_max);
// (1 - (1/l) sum_{i=1..l} 1 / (kappa - i + 1))^{-1}
double TopLMultiplier(int ell_max, int kappa_max);

enum class TopologyKind { kComplete, kSparseRandom, kChain, kStar, kBarbell };

std::optional<TopologyKind> ParseTopologyKind(std::string_view name);
std::string_view TopologyKindName(TopologyKind kind);

struct Topology {
  std::vector<Offering> offerings;
  // Chain and barbell only: items take 0 or b by set, then centered.
  std::optional<Eigen::VectorXd> worst_case_theta;
};

// Offerings over items [0, d). Throws InvalidInputError when the size
// constraints of the construction are violated.
//   complete: kappa = d repeats the full set; kappa = 2 cycles through all
//             pairs; otherwise uniform random kappa-sets.
//   sparse-random: uniform random kappa-sets.
//   chain: (d-1) % (kappa-1) == 0 and n % ((d-1)/(kappa-1)) == 0.
//   star: same congruences; a random split of the non-center items into
//         groups of kappa-1, each joined with the center.
//   barbell: (d - kappa) even, (d - kappa)/2 + 1 >= kappa, d % kappa == 0.
Topology GenerateTopology(TopologyKind kind, int d, int kappa, int n,
                          double b, std::uint64_t seed);

}  // namespace rankbreak

#endif  // RANKBREAK_GRAPH_METRICS_H_
