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

#include "rankbreak/graph_metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "rankbreak/errors.h"

namespace rankbreak {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double DLogD(int d) { return d * std::log(static_cast<double>(d)); }

// Uniform random kappa-subset of [0, d), sorted.
std::vector<int> RandomSubset(int d, int kappa, std::mt19937_64& rng) {
  std::vector<int> pool(d);
  std::iota(pool.begin(), pool.end(), 0);
  for (int k = 0; k < kappa; ++k) {
    std::uniform_int_distribution<int> pick(k, d - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(kappa);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<int> RandomSubsetOf(const std::vector<int>& pool_in, int kappa,
                                std::mt19937_64& rng) {
  std::vector<int> pick_idx = RandomSubset(static_cast<int>(pool_in.size()),
                                           kappa, rng);
  std::vector<int> out;
  for (int k : pick_idx) out.push_back(pool_in[k]);
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::VectorXd Centered(Eigen::VectorXd v) {
  v.array() -= v.mean();
  return v;
}

}  // namespace

ComparisonGraph::ComparisonGraph(int num_items,
                                 std::span<const Offering> offerings,
                                 std::span<const double> masses)
    : adjacency_(Eigen::MatrixXd::Zero(num_items, num_items)) {
  if (offerings.size() != masses.size()) {
    throw InvalidInputError("one mass per offering is required");
  }
  for (std::size_t j = 0; j < offerings.size(); ++j) {
    const auto& items = offerings[j].items();
    const int kappa = offerings[j].kappa();
    const double w = masses[j] / (kappa * (kappa - 1.0));
    for (int x = 0; x < kappa; ++x) {
      for (int y = x + 1; y < kappa; ++y) {
        const int i = items[x];
        const int k = items[y];
        if (i < 0 || k < 0 || i >= num_items || k >= num_items) {
          throw InvalidInputError("offering item outside [0, " +
                                  std::to_string(num_items) + ")");
        }
        adjacency_(i, k) += w;
        adjacency_(k, i) += w;
      }
    }
  }
}

ComparisonGraph::ComparisonGraph(Eigen::MatrixXd adjacency)
    : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols()) {
    throw InvalidInputError("adjacency must be square");
  }
  for (Eigen::Index i = 0; i < adjacency_.rows(); ++i) {
    if (adjacency_(i, i) != 0.0) {
      throw InvalidInputError("adjacency must have a zero diagonal");
    }
    for (Eigen::Index k = 0; k < adjacency_.cols(); ++k) {
      if (!(adjacency_(i, k) >= 0.0) || adjacency_(i, k) != adjacency_(k, i)) {
        throw InvalidInputError("adjacency must be symmetric and nonnegative");
      }
    }
  }
}

Eigen::MatrixXd ComparisonGraph::Laplacian() const {
  Eigen::MatrixXd lap = -adjacency_;
  lap.diagonal() = degree();
  return lap;
}

double ComparisonGraph::MaxDegree() const {
  return adjacency_.rows() == 0 ? 0.0 : degree().maxCoeff();
}

ComparisonGraph BuildComparisonGraph(const BrokenDataset& dataset) {
  std::vector<Offering> offerings;
  std::vector<double> masses;
  const auto& weights = dataset.weights();
  for (std::size_t j = 0; j < dataset.samples().size(); ++j) {
    const BrokenSample& s = dataset.samples()[j];
    double mass = 0.0;  // tau_j * l_j
    for (std::size_t a = 0; a < s.graphs.size(); ++a) {
      mass += weights[j][a] * (s.kappa - s.graphs[a].position);
    }
    offerings.emplace_back(s.offering);
    masses.push_back(mass);
  }
  return ComparisonGraph(dataset.num_items(), offerings, masses);
}

Eigen::VectorXd NontrivialSpectrum(const Eigen::MatrixXd& laplacian) {
  const Eigen::Index d = laplacian.rows();
  if (d < 2) return Eigen::VectorXd();
  const double shift = laplacian.trace() + 1.0;
  // Lifts the all-ones eigenvalue from 0 to `shift`, above every other one.
  Eigen::MatrixXd deflated =
      laplacian + Eigen::MatrixXd::Constant(d, d, shift / d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      deflated, Eigen::EigenvaluesOnly);
  Eigen::VectorXd all = solver.eigenvalues();
  // The lifted direction is the largest eigenvalue since lambda_d <= 2 D_max
  // <= Tr(L) < shift.
  Eigen::VectorXd rest = all.head(d - 1);
  for (Eigen::Index i = 0; i < rest.size(); ++i) {
    rest[i] = std::max(rest[i], 0.0);
  }
  return rest;
}

double Lambda2(const Eigen::MatrixXd& laplacian) {
  const Eigen::VectorXd spectrum = NontrivialSpectrum(laplacian);
  return spectrum.size() == 0 ? 0.0 : spectrum[0];
}

double Alpha(const ComparisonGraph& graph) {
  const double trace = graph.Trace();
  if (!(trace > 0.0)) throw InvalidInputError("comparison graph is empty");
  return Lambda2(graph.Laplacian()) * (graph.num_items() - 1) / trace;
}

double Beta(const ComparisonGraph& graph) {
  const double trace = graph.Trace();
  if (!(trace > 0.0)) throw InvalidInputError("comparison graph is empty");
  return trace / (graph.num_items() * graph.MaxDegree());
}

double Gamma(const BrokenDataset& dataset, double b) {
  if (b < 0.0) throw InvalidInputError("b must be nonnegative");
  const double exponent = std::ceil(2.0 * std::exp(2.0 * b)) - 2.0;
  double gamma = 1.0;
  for (const BrokenSample& s : dataset.samples()) {
    const int last = s.graphs.back().position;
    gamma = std::min(
        gamma, std::pow(1.0 - static_cast<double>(last) / s.kappa, exponent));
  }
  return gamma;
}

double EtaOf(const BrokenSample& sample) {
  const int ell = sample.num_separators();
  const int below_last = sample.kappa - sample.graphs.back().position;
  return static_cast<double>(sample.kappa) / std::max(ell, below_last);
}

double Eta(const BrokenDataset& dataset) {
  double eta = 0.0;
  for (const BrokenSample& s : dataset.samples()) eta = std::max(eta, EtaOf(s));
  return eta;
}

GeneralWeightDiagnostics ComputeGeneralWeightDiagnostics(
    const BrokenDataset& dataset) {
  GeneralWeightDiagnostics out;
  out.tau = kInf;
  const auto& weights = dataset.weights();
  for (std::size_t j = 0; j < dataset.samples().size(); ++j) {
    const BrokenSample& s = dataset.samples()[j];
    const int ell = s.num_separators();
    double mass = 0.0;
    double largest = 0.0;
    double total = 0.0;
    for (int a = 0; a < ell; ++a) {
      const double term = weights[j][a] * (s.kappa - s.graphs[a].position);
      mass += term;
      largest = std::max(largest, term);
      total += weights[j][a];
    }
    const double tau_j = mass / ell;
    const double d1 = largest + total;
    const double d2 = total;
    const double bound =
        4.0 * d1 * d1 +
        2.0 * (d1 * d2 + d2 * d2) * s.kappa / (EtaOf(s) * ell);
    out.tau_j.push_back(tau_j);
    out.delta_1.push_back(d1);
    out.delta_2.push_back(d2);
    out.tau = std::min(out.tau, tau_j);
    out.delta = std::max(out.delta, bound);
  }
  if (out.tau_j.empty()) out.tau = 0.0;
  return out;
}

double Chi(int kappa) {
  if (kappa < 3) throw InvalidInputError("chi needs kappa >= 3");
  return 0.25 * -std::expm1(-2.0 / (9.0 * (kappa - 2)));
}

Diagnostics Diagnose(const BrokenDataset& dataset, double b) {
  if (dataset.num_samples() == 0) {
    throw InvalidInputError("cannot diagnose an empty dataset");
  }
  if (b < 0.0) throw InvalidInputError("b must be nonnegative");
  Diagnostics diag;
  diag.num_items = dataset.num_items();
  diag.num_samples = dataset.num_samples();
  const ComparisonGraph graph = BuildComparisonGraph(dataset);
  diag.trace = graph.Trace();
  diag.d_max = graph.MaxDegree();
  diag.lambda2 = Lambda2(graph.Laplacian());
  if (diag.trace > 0.0) {
    diag.alpha = diag.lambda2 * (diag.num_items - 1) / diag.trace;
    diag.beta = diag.trace / (diag.num_items * diag.d_max);
  }
  diag.gamma = Gamma(dataset, b);
  diag.eta = Eta(dataset);
  const GeneralWeightDiagnostics general =
      ComputeGeneralWeightDiagnostics(dataset);
  diag.tau = general.tau;
  diag.delta = general.delta;
  const auto& weights = dataset.weights();
  for (std::size_t j = 0; j < dataset.samples().size(); ++j) {
    const BrokenSample& s = dataset.samples()[j];
    diag.ell_max = std::max(diag.ell_max, s.num_separators());
    diag.kappa_max = std::max(diag.kappa_max, s.kappa);
    diag.effective_sample_size += s.num_separators();
    for (int a = 0; a < s.num_separators(); ++a) {
      const double gap = s.kappa - s.graphs[a].position;
      diag.weighted_pairs += weights[j][a] * gap;
      diag.weighted_squares += weights[j][a] * weights[j][a] * gap * (gap + 1);
    }
  }
  diag.chi = diag.kappa_max >= 3 ? Chi(diag.kappa_max) : 0.0;
  return diag;
}

std::optional<BoundRegime> ParseBoundRegime(std::string_view name) {
  if (name == "general-optimal") return BoundRegime::kGeneralOptimal;
  if (name == "general-custom") return BoundRegime::kGeneralCustom;
  if (name == "top-l") return BoundRegime::kTopL;
  if (name == "bottom-l") return BoundRegime::kBottomL;
  return std::nullopt;
}

std::string_view BoundRegimeName(BoundRegime regime) {
  switch (regime) {
    case BoundRegime::kGeneralOptimal:
      return "general-optimal";
    case BoundRegime::kGeneralCustom:
      return "general-custom";
    case BoundRegime::kTopL:
      return "top-l";
    case BoundRegime::kBottomL:
      return "bottom-l";
  }
  return "";
}

SampleComplexity CheckSampleComplexity(const Diagnostics& diag, int d,
                                       double b, BoundRegime regime) {
  if (d < 2) throw InvalidInputError("sample complexity needs d >= 2");
  SampleComplexity out;
  out.actual = diag.effective_sample_size;
  const double dlogd = DLogD(d);
  switch (regime) {
    case BoundRegime::kGeneralOptimal: {
      const double log_ell = std::log(diag.ell_max + 2.0);
      out.infeasible = !(diag.alpha > 0.0 && diag.gamma > 0.0 &&
                         diag.beta > 0.0);
      if (!out.infeasible) {
        out.required = 2048.0 * std::exp(18.0 * b) * diag.eta * log_ell *
                       log_ell /
                       (diag.alpha * diag.alpha * diag.gamma * diag.gamma *
                        diag.beta) *
                       dlogd;
      }
      break;
    }
    case BoundRegime::kGeneralCustom:
      out.actual = diag.weighted_pairs;
      out.infeasible = !(diag.alpha > 0.0 && diag.gamma > 0.0 &&
                         diag.beta > 0.0 && diag.tau > 0.0);
      if (!out.infeasible) {
        out.required = 64.0 * std::exp(18.0 * b) * diag.eta * diag.delta /
                       (diag.alpha * diag.alpha * diag.beta * diag.gamma *
                        diag.gamma * diag.tau) *
                       dlogd;
      }
      break;
    case BoundRegime::kTopL:
      out.infeasible = !(diag.alpha > 0.0 && diag.beta > 0.0);
      if (!out.infeasible) {
        out.required = 4096.0 * std::exp(6.0 * b) /
                       (diag.beta * diag.alpha * diag.alpha) * dlogd;
      }
      break;
    case BoundRegime::kBottomL: {
      out.infeasible = !(diag.chi > 0.0 && diag.ell_max > 0);
      if (!out.infeasible) {
        const double ratio =
            static_cast<double>(diag.kappa_max) / diag.ell_max;
        out.required = 16384.0 * std::exp(8.0 * b) / (diag.chi * diag.chi) *
                       ratio * ratio * ratio * dlogd;
      }
      break;
    }
  }
  if (out.infeasible) out.required = kInf;
  out.satisfied = !out.infeasible && out.actual >= out.required;
  return out;
}

double TheoreticalErrorBound(const Diagnostics& diag, int d, double b,
                             BoundRegime regime) {
  if (d < 2) throw InvalidInputError("error bound needs d >= 2");
  if (!(diag.effective_sample_size > 0.0)) {
    throw InvalidInputError("error bound needs a positive effective sample "
                            "size");
  }
  const double dlogd = DLogD(d);
  const double e2b = std::exp(2.0 * b);
  const double general_prefactor =
      4.0 * std::sqrt(2.0) * std::exp(4.0 * b) * (1.0 + e2b) * (1.0 + e2b);
  switch (regime) {
    case BoundRegime::kGeneralOptimal:
      if (!(diag.alpha > 0.0 && diag.gamma > 0.0)) return kInf;
      return general_prefactor / (diag.alpha * diag.gamma) *
             std::sqrt(dlogd / diag.effective_sample_size);
    case BoundRegime::kGeneralCustom:
      if (!(diag.weighted_pairs > 0.0)) {
        throw InvalidInputError("general-custom bound needs weighted pair "
                                "totals");
      }
      if (!(diag.alpha > 0.0 && diag.gamma > 0.0)) return kInf;
      return general_prefactor * std::sqrt(dlogd) / (diag.alpha * diag.gamma) *
             std::sqrt(diag.weighted_squares) / diag.weighted_pairs;
    case BoundRegime::kTopL:
      if (!(diag.alpha > 0.0)) return kInf;
      return 16.0 * (1.0 + e2b) * (1.0 + e2b) / diag.alpha *
             std::sqrt(dlogd / diag.effective_sample_size);
    case BoundRegime::kBottomL: {
      if (!(diag.chi > 0.0)) {
        throw InvalidInputError("bottom-l bound needs kappa >= 3");
      }
      const double e4b = std::exp(4.0 * b);
      const double ratio = static_cast<double>(diag.kappa_max) / diag.ell_max;
      return 128.0 * (1.0 + e4b) * (1.0 + e4b) / diag.chi *
             std::pow(ratio, 1.5) *
             std::sqrt(dlogd / diag.effective_sample_size);
    }
  }
  return kInf;
}

namespace {

CramerRaoBound ScaledCramerRao(const Eigen::MatrixXd& laplacian,
                               double multiplier, bool scale_floor) {
  const Eigen::Index d = laplacian.rows();
  if (d < 2) throw InvalidInputError("Cramer-Rao bound needs d >= 2");
  CramerRaoBound out;
  const Eigen::VectorXd spectrum = NontrivialSpectrum(laplacian);
  const double trace = laplacian.trace();
  if (!(spectrum[0] > 0.0) || !(trace > 0.0)) {
    out.infinite = true;
    out.bound = kInf;
    out.jensen_floor = trace > 0.0 ? (d - 1.0) * (d - 1.0) / trace : kInf;
    if (scale_floor) out.jensen_floor *= multiplier;
    return out;
  }
  out.bound = multiplier * spectrum.cwiseInverse().sum();
  out.jensen_floor = (d - 1.0) * (d - 1.0) / trace;
  if (scale_floor) out.jensen_floor *= multiplier;
  return out;
}

}  // namespace

CramerRaoBound CramerRaoPositionP(const Eigen::MatrixXd& laplacian, int p,
                                  int kappa_max) {
  if (p < 1 || kappa_max < 2) {
    throw InvalidInputError("position-p bound needs p >= 1, kappa_max >= 2");
  }
  const double lk = std::log(static_cast<double>(kappa_max));
  return ScaledCramerRao(laplacian, 1.0 / (2.0 * p * lk * lk), true);
}

double CramerRaoPositionPFloor(int d, double n, int p, int kappa_max) {
  if (d < 2 || !(n > 0.0) || p < 1 || kappa_max < 2) {
    throw InvalidInputError("position-p floor needs d >= 2, n > 0, p >= 1, "
                            "kappa_max >= 2");
  }
  const double lk = std::log(static_cast<double>(kappa_max));
  return (d - 1.0) * (d - 1.0) / n / (2.0 * p * lk * lk);
}

double TopLMultiplier(int ell_max, int kappa_max) {
  if (ell_max < 1 || ell_max >= kappa_max) {
    throw InvalidInputError("top-l multiplier needs 1 <= l_max < kappa_max");
  }
  double harmonic = 0.0;
  for (int i = 1; i <= ell_max; ++i) harmonic += 1.0 / (kappa_max - i + 1);
  return 1.0 / (1.0 - harmonic / ell_max);
}

CramerRaoBound CramerRaoTopL(const Eigen::MatrixXd& laplacian, int ell_max,
                             int kappa_max) {
  return ScaledCramerRao(laplacian, TopLMultiplier(ell_max, kappa_max), false);
}

std::optional<TopologyKind> ParseTopologyKind(std::string_view name) {
  if (name == "complete") return TopologyKind::kComplete;
  if (name == "sparse-random") return TopologyKind::kSparseRandom;
  if (name == "chain") return TopologyKind::kChain;
  if (name == "star") return TopologyKind::kStar;
  if (name == "barbell") return TopologyKind::kBarbell;
  return std::nullopt;
}

std::string_view TopologyKindName(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kComplete:
      return "complete";
    case TopologyKind::kSparseRandom:
      return "sparse-random";
    case TopologyKind::kChain:
      return "chain";
    case TopologyKind::kStar:
      return "star";
    case TopologyKind::kBarbell:
      return "barbell";
  }
  return "";
}

Topology GenerateTopology(TopologyKind kind, int d, int kappa, int n,
                          double b, std::uint64_t seed) {
  if (kappa < 2 || kappa > d) {
    throw InvalidInputError("topology needs 2 <= kappa <= d");
  }
  if (n < 1) throw InvalidInputError("topology needs n >= 1");
  if (b < 0.0) throw InvalidInputError("b must be nonnegative");
  std::mt19937_64 rng(seed);
  Topology out;
  switch (kind) {
    case TopologyKind::kComplete: {
      if (kappa == d) {
        std::vector<int> all(d);
        std::iota(all.begin(), all.end(), 0);
        for (int j = 0; j < n; ++j) out.offerings.emplace_back(all);
      } else if (kappa == 2) {
        std::vector<std::vector<int>> pairs;
        for (int i = 0; i < d; ++i) {
          for (int k = i + 1; k < d; ++k) pairs.push_back({i, k});
        }
        for (int j = 0; j < n; ++j) {
          out.offerings.emplace_back(pairs[j % pairs.size()]);
        }
      } else {
        for (int j = 0; j < n; ++j) {
          out.offerings.emplace_back(RandomSubset(d, kappa, rng));
        }
      }
      break;
    }
    case TopologyKind::kSparseRandom:
      for (int j = 0; j < n; ++j) {
        out.offerings.emplace_back(RandomSubset(d, kappa, rng));
      }
      break;
    case TopologyKind::kChain:
    case TopologyKind::kStar: {
      if ((d - 1) % (kappa - 1) != 0) {
        throw InvalidInputError("chain and star designs need (d - 1) % "
                                "(kappa - 1) == 0, got d=" +
                                std::to_string(d) + ", kappa=" +
                                std::to_string(kappa));
      }
      const int sets = (d - 1) / (kappa - 1);
      if (n % sets != 0) {
        throw InvalidInputError("n must be a multiple of (d - 1)/(kappa - 1) = "
                                + std::to_string(sets));
      }
      std::vector<std::vector<int>> groups(sets);
      if (kind == TopologyKind::kChain) {
        for (int t = 0; t < sets; ++t) {
          for (int k = 0; k < kappa; ++k) {
            groups[t].push_back(t * (kappa - 1) + k);
          }
        }
        // First half of the sets at 0, the rest at b; shared items follow the
        // earlier set.
        Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
        for (int t = sets / 2; t < sets; ++t) {
          for (int k = (t == sets / 2 ? 1 : 0); k < kappa; ++k) {
            theta[groups[t][k]] = b;
          }
        }
        if (sets == 1) theta.setZero();
        out.worst_case_theta = Centered(theta);
      } else {
        std::vector<int> others(d - 1);
        std::iota(others.begin(), others.end(), 1);
        std::shuffle(others.begin(), others.end(), rng);
        for (int t = 0; t < sets; ++t) {
          groups[t].push_back(0);
          for (int k = 0; k < kappa - 1; ++k) {
            groups[t].push_back(others[t * (kappa - 1) + k]);
          }
          std::sort(groups[t].begin(), groups[t].end());
        }
      }
      const int repeats = n / sets;
      for (int t = 0; t < sets; ++t) {
        for (int r = 0; r < repeats; ++r) out.offerings.emplace_back(groups[t]);
      }
      break;
    }
    case TopologyKind::kBarbell: {
      if ((d - kappa) % 2 != 0 || (d - kappa) / 2 + 1 < kappa ||
          d % kappa != 0 || kappa < 3) {
        throw InvalidInputError("barbell design needs kappa >= 3, d % kappa "
                                "== 0, (d - kappa) even and (d - kappa)/2 + 1 "
                                ">= kappa");
      }
      std::vector<int> perm(d);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      // perm[0], perm[1] are the bridge items i and j.
      const int bridge_i = perm[0];
      const int bridge_j = perm[1];
      std::vector<int> connector(perm.begin(), perm.begin() + kappa);
      std::sort(connector.begin(), connector.end());
      const int half = (d - kappa) / 2;
      std::vector<int> side1(perm.begin() + kappa,
                             perm.begin() + kappa + half);
      std::vector<int> side2(perm.begin() + kappa + half, perm.end());
      side1.push_back(bridge_i);
      side2.push_back(bridge_j);
      std::sort(side1.begin(), side1.end());
      std::sort(side2.begin(), side2.end());

      const int connector_count = std::max(
          1, static_cast<int>(std::lround(static_cast<double>(n) * kappa / d)));
      const int per_connector = d / kappa - 1;
      for (int c = 0; c < connector_count; ++c) {
        out.offerings.emplace_back(connector);
        for (int g = 0; g < per_connector; ++g) {
          const auto& side = (g % 2 == 0) ? side1 : side2;
          out.offerings.emplace_back(RandomSubsetOf(side, kappa, rng));
        }
      }
      // Side 1 and bridge i at 0, side 2 and bridge j at b; the remaining
      // connector items split evenly.
      Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
      for (int item : side2) theta[item] = b;
      for (int k = 2; k < kappa; ++k) {
        if ((k - 2) % 2 == 1) theta[perm[k]] = b;
      }
      out.worst_case_theta = Centered(theta);
      break;
    }
  }
  return out;
}

}  // namespace rankbreak
