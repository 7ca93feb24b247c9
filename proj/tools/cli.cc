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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "rankbreak/errors.h"
#include "rankbreak/estimator.h"
#include "rankbreak/experiments.h"
#include "rankbreak/graph_metrics.h"
#include "rankbreak/io.h"
#include "rankbreak/objective.h"
#include "rankbreak/rank_breaking.h"

namespace rankbreak::cli {
namespace {

const std::vector<std::string> kPlacements = {
    "top-l",     "random-l",   "random-l-top-half", "random-l-fixed",
    "bottom-l",  "position-p", "custom"};
const std::vector<std::string> kSchemes = {"optimal", "uniform",
                                           "inverse-kappa"};
const std::vector<std::string> kEstimators = {
    "rank-breaking", "full-breaking", "mle-topl", "restricted-bottom",
    "naive-random"};
const std::vector<std::string> kTopologies = {
    "uniform", "complete", "sparse-random", "chain", "star", "barbell"};

struct ScenarioFlags {
  std::uint64_t seed = 0;
  int d = 64;
  int n = 1000;
  int kappa = 16;
  int ell = 4;
  int position = 1;
  std::vector<int> custom_positions;
  std::string placement = "random-l";
  std::string topology = "uniform";
  std::string theta = "uniform";
  double b = 2.0;
  int trials = 10;
};

struct FitFlags {
  double tol = 1e-8;
  int max_iters = 10000;
  std::string method = "newton";
};

struct Outputs {
  std::string out;
};

void AddScenarioFlags(CLI::App* app, ScenarioFlags& f) {
  app->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  app->add_option("--d", f.d, "Number of items")->capture_default_str();
  app->add_option("--n", f.n, "Number of samples")->capture_default_str();
  app->add_option("--kappa", f.kappa, "Offering size")->capture_default_str();
  app->add_option("--ell", f.ell, "Separators per sample")
      ->capture_default_str();
  app->add_option("--position", f.position, "Separator position for "
                  "position-p")->capture_default_str();
  app->add_option("--positions", f.custom_positions,
                  "Comma-separated positions for the custom placement")
      ->delimiter(',');
  app->add_option("--placement", f.placement, "Separator placement")
      ->check(CLI::IsMember(kPlacements))
      ->capture_default_str();
  app->add_option("--topology", f.topology, "Offering design")
      ->check(CLI::IsMember(kTopologies))
      ->capture_default_str();
  app->add_option("--theta", f.theta, "True utilities: uniform or worst-case")
      ->check(CLI::IsMember({"uniform", "worst-case"}))
      ->capture_default_str();
  app->add_option("--b", f.b, "Dynamic range bound")->capture_default_str();
  app->add_option("--trials", f.trials, "Trials per grid point")
      ->capture_default_str();
}

void AddFitFlags(CLI::App* app, FitFlags& f) {
  app->add_option("--tol", f.tol, "Projected-gradient tolerance")
      ->capture_default_str();
  app->add_option("--max-iters", f.max_iters, "Iteration cap")
      ->capture_default_str();
  app->add_option("--method", f.method, "Optimizer")
      ->check(CLI::IsMember({"newton", "gradient", "mm"}))
      ->capture_default_str();
}

FitConfig MakeFitConfig(const FitFlags& f, double b) {
  FitConfig config;
  config.b = b;
  config.tolerance = f.tol;
  config.max_iterations = f.max_iters;
  if (f.method == "gradient") {
    config.method = FitMethod::kProjectedGradient;
  } else if (f.method == "mm") {
    config.method = FitMethod::kMinorizationMaximization;
  }
  if (!(config.tolerance > 0.0)) {
    throw InvalidInputError("--tol must be positive");
  }
  if (config.max_iterations < 1) {
    throw InvalidInputError("--max-iters must be positive");
  }
  return config;
}

ScenarioSpec MakeScenario(const ScenarioFlags& f) {
  ScenarioSpec spec;
  spec.seed = f.seed;
  spec.d = f.d;
  spec.n = f.n;
  spec.kappa = f.kappa;
  spec.ell = f.ell;
  spec.position = f.position;
  spec.custom_positions = f.custom_positions;
  spec.placement = *ParsePlacement(f.placement);
  if (f.topology != "uniform") spec.topology = ParseTopologyKind(f.topology);
  spec.theta_source =
      f.theta == "worst-case" ? ThetaSource::kWorstCase : ThetaSource::kUniform;
  spec.b = f.b;
  spec.trials = f.trials;
  ValidateScenario(spec);
  return spec;
}

std::vector<EstimatorSpec> MakeEstimators(
    const std::vector<std::string>& estimators,
    const std::vector<std::string>& schemes) {
  std::vector<EstimatorSpec> out;
  for (const std::string& e : estimators) {
    const EstimatorKind kind = *ParseEstimatorKind(e);
    if (kind == EstimatorKind::kRankBreaking) {
      for (const std::string& s : schemes) {
        out.push_back({kind, WeightScheme{*ParseWeightKind(s), {}}});
      }
    } else {
      out.push_back({kind, WeightScheme::Uniform()});
    }
  }
  return out;
}

// Writes `text` to --out when given, else to `out`.
void Deliver(const std::string& path, const std::string& text,
             std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    WriteFile(path, text);
  }
}

std::string CsvText(const std::vector<ScalingRow>& rows) {
  std::ostringstream buffer;
  WriteCsv(ScalingHeader(), ScalingRowsToCsv(rows), buffer);
  return buffer.str();
}

PartialOrderData LoadOrders(const std::string& path) {
  return ParsePartialOrdersJsonl(std::filesystem::path(path));
}

std::vector<int> ParseItemList(const std::string& text,
                               const ItemIndex& index) {
  std::vector<int> out;
  std::stringstream stream(text);
  std::string id;
  while (std::getline(stream, id, ',')) {
    const int idx = index.Find(id);
    if (idx < 0) throw InvalidInputError("unknown item in --reference: " + id);
    out.push_back(idx);
  }
  return out;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Plackett-Luce estimation from partial orders by rank-breaking",
               "rankbreak"};
  app.require_subcommand(1);

  // simulate
  ScenarioFlags sim_flags;
  FitFlags sim_fit;
  std::vector<std::string> sim_estimators = {"rank-breaking"};
  std::vector<std::string> sim_schemes = {"optimal"};
  std::string sim_out;
  std::string sim_id = "simulate";
  double sim_c = 1.0;
  bool sim_runtime = false;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run Monte Carlo trials, emit CSV");
  AddScenarioFlags(simulate, sim_flags);
  AddFitFlags(simulate, sim_fit);
  simulate->add_option("--estimator", sim_estimators, "Estimators")
      ->delimiter(',')
      ->check(CLI::IsMember(kEstimators));
  simulate->add_option("--scheme", sim_schemes, "Weight schemes")
      ->delimiter(',')
      ->check(CLI::IsMember(kSchemes));
  simulate->add_option("--out", sim_out, "CSV path (default stdout)");
  simulate->add_option("--scenario-id", sim_id, "scenario_id column")
      ->capture_default_str();
  simulate->add_option("--normalization", sim_c, "MSE scale constant C")
      ->capture_default_str();
  simulate->add_flag("--runtime", sim_runtime, "Fill runtime_ms");

  // bench
  ScenarioFlags bench_flags;
  FitFlags bench_fit;
  std::vector<std::string> bench_estimators = {"rank-breaking"};
  std::vector<std::string> bench_schemes = {"optimal"};
  std::string bench_axis = "n";
  std::vector<int> bench_values;
  std::string bench_out;
  std::string bench_id = "bench";
  double bench_c = 1.0;
  bool bench_runtime = false;
  CLI::App* bench =
      app.add_subcommand("bench", "Scaling table over one axis, emit CSV");
  AddScenarioFlags(bench, bench_flags);
  AddFitFlags(bench, bench_fit);
  bench->add_option("--axis", bench_axis, "Axis to vary")
      ->check(CLI::IsMember({"n", "ell", "d"}))
      ->capture_default_str();
  bench->add_option("--values", bench_values, "Axis values")
      ->delimiter(',')
      ->required();
  bench->add_option("--estimator", bench_estimators, "Estimators")
      ->delimiter(',')
      ->check(CLI::IsMember(kEstimators));
  bench->add_option("--scheme", bench_schemes, "Weight schemes")
      ->delimiter(',')
      ->check(CLI::IsMember(kSchemes));
  bench->add_option("--out", bench_out, "CSV path (default stdout)");
  bench->add_option("--scenario-id", bench_id, "scenario_id column")
      ->capture_default_str();
  bench->add_option("--normalization", bench_c, "MSE scale constant C")
      ->capture_default_str();
  bench->add_flag("--runtime", bench_runtime, "Fill runtime_ms");

  // fit
  std::string fit_data;
  std::string fit_scheme = "optimal";
  std::string fit_estimator = "rank-breaking";
  std::string fit_reference;
  int fit_restricted = 0;
  double fit_b = 2.0;
  FitFlags fit_flags;
  std::string fit_out;
  CLI::App* fit = app.add_subcommand("fit", "Fit utilities, emit JSON");
  fit->add_option("--data", fit_data, "Partial orders (JSONL)")->required();
  fit->add_option("--scheme", fit_scheme, "Weight scheme")
      ->check(CLI::IsMember(kSchemes))
      ->capture_default_str();
  fit->add_option("--estimator", fit_estimator, "Estimator")
      ->check(CLI::IsMember(
          {"rank-breaking", "full-breaking", "mle-topl", "restricted-bottom"}))
      ->capture_default_str();
  fit->add_option("--b", fit_b, "Dynamic range bound")->capture_default_str();
  fit->add_option("--reference", fit_reference,
                  "restricted-bottom: comma-separated ids, weakest first");
  fit->add_option("--restricted-size", fit_restricted,
                  "restricted-bottom: number of weakest items kept");
  AddFitFlags(fit, fit_flags);
  fit->add_option("--out", fit_out, "JSON path (default stdout)");

  // diagnose
  std::string diag_data;
  std::string diag_scheme = "optimal";
  std::string diag_regime = "general-optimal";
  double diag_b = 2.0;
  std::string diag_out;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Design diagnostics and bounds, JSON");
  diagnose->add_option("--data", diag_data, "Partial orders (JSONL)")
      ->required();
  diagnose->add_option("--scheme", diag_scheme, "Weight scheme")
      ->check(CLI::IsMember(kSchemes))
      ->capture_default_str();
  diagnose->add_option("--regime", diag_regime, "Bound regime")
      ->check(CLI::IsMember(
          {"general-optimal", "general-custom", "top-l", "bottom-l"}))
      ->capture_default_str();
  diagnose->add_option("--b", diag_b, "Dynamic range bound")
      ->capture_default_str();
  diagnose->add_option("--out", diag_out, "JSON path (default stdout)");

  // ingest
  std::string ingest_format;
  std::string ingest_input;
  std::string ingest_out;
  std::string ingest_ties = "block";
  std::vector<int> ingest_positions;
  int ingest_top = 0;
  CLI::App* ingest =
      app.add_subcommand("ingest", "Convert SOC or ratings data to JSONL");
  ingest->add_option("--format", ingest_format, "Input format")
      ->check(CLI::IsMember({"soc", "ratings"}))
      ->required();
  ingest->add_option("--input", ingest_input, "Input file")->required();
  ingest->add_option("--out", ingest_out, "JSONL path (default stdout)");
  ingest->add_option("--tie-policy", ingest_ties, "Ratings tie policy")
      ->capture_default_str();
  ingest->add_option("--positions", ingest_positions,
                     "soc: cut rankings at these positions")
      ->delimiter(',');
  ingest->add_option("--ell", ingest_top,
                     "soc: keep the top-l prefix (positions 1..l)");

  std::vector<std::string> argv_tail(args.rbegin(), args.rend());
  if (!argv_tail.empty()) argv_tail.pop_back();  // program name
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (simulate->parsed() || bench->parsed()) {
      const bool is_bench = bench->parsed();
      const ScenarioFlags& flags = is_bench ? bench_flags : sim_flags;
      ScenarioSpec spec = MakeScenario(flags);
      TrialOptions options;
      options.fit = MakeFitConfig(is_bench ? bench_fit : sim_fit, spec.b);
      options.normalization.c = is_bench ? bench_c : sim_c;
      options.measure_runtime = is_bench ? bench_runtime : sim_runtime;
      const std::vector<EstimatorSpec> estimators = MakeEstimators(
          is_bench ? bench_estimators : sim_estimators,
          is_bench ? bench_schemes : sim_schemes);
      std::vector<ScalingRow> rows;
      if (is_bench) {
        rows = ScalingTable(*ParseScalingAxis(bench_axis), bench_values, spec,
                            estimators, options, bench_id);
      } else {
        const std::vector<int> single = {spec.n};
        rows = ScalingTable(ScalingAxis::kN, single, spec, estimators, options,
                            sim_id);
      }
      Deliver(is_bench ? bench_out : sim_out, CsvText(rows), out);
      return kExitOk;
    }

    if (fit->parsed()) {
      const PartialOrderData data = LoadOrders(fit_data);
      const int d = data.index.size();
      const FitConfig config = MakeFitConfig(fit_flags, fit_b);
      std::optional<FitResult> result;
      const BrokenDataset dataset(data.orders, d);
      if (fit_estimator == "rank-breaking") {
        result = FitRankBreaking(
            dataset.WithScheme(WeightScheme{*ParseWeightKind(fit_scheme), {}}),
            config);
      } else if (fit_estimator == "full-breaking") {
        result = FitFullBreaking(data.orders, d, config);
      } else if (fit_estimator == "mle-topl") {
        std::vector<TopRanking> tops;
        for (const PartialOrder& o : data.orders) tops.push_back(ToTopRanking(o));
        result = FitMleTopL(tops, d, config);
      } else {
        if (fit_reference.empty()) {
          throw InvalidInputError("restricted-bottom needs --reference");
        }
        const std::vector<int> reference =
            ParseItemList(fit_reference, data.index);
        const int size = fit_restricted > 0
                             ? fit_restricted
                             : static_cast<int>(reference.size());
        result = FitRestrictedBottomL(dataset, reference, size, config);
      }
      nlohmann::json json = FitResultToJson(*result, data.index);
      json["estimator"] = fit_estimator;
      if (fit_estimator == "rank-breaking") json["scheme"] = fit_scheme;
      Deliver(fit_out, json.dump(2) + "\n", out);
      return kExitOk;
    }

    if (diagnose->parsed()) {
      const PartialOrderData data = LoadOrders(diag_data);
      const int d = data.index.size();
      const BrokenDataset dataset =
          BrokenDataset(data.orders, d)
              .WithScheme(WeightScheme{*ParseWeightKind(diag_scheme), {}});
      const Diagnostics diag = Diagnose(dataset, diag_b);
      const BoundRegime regime = *ParseBoundRegime(diag_regime);
      nlohmann::json json;
      json["diagnostics"] = DiagnosticsToJson(diag);
      json["scheme"] = diag_scheme;
      json["b"] = diag_b;
      if (d >= 2) {
        const SampleComplexity sc = CheckSampleComplexity(diag, d, diag_b,
                                                          regime);
        json["sample_complexity"] = {
            {"regime", diag_regime},
            {"required", sc.infeasible ? nlohmann::json(nullptr)
                                       : nlohmann::json(sc.required)},
            {"actual", sc.actual},
            {"satisfied", sc.satisfied},
            {"infeasible", sc.infeasible}};
        const double bound = TheoreticalErrorBound(diag, d, diag_b, regime);
        json["error_bound"] = std::isfinite(bound) ? nlohmann::json(bound)
                                                   : nlohmann::json(nullptr);
        const Eigen::MatrixXd lap = BuildComparisonGraph(dataset).Laplacian();
        bool all_top = true;
        for (const PartialOrder& o : data.orders) all_top &= IsTopPrefix(o);
        auto cr_json = [](const CramerRaoBound& cr) {
          return nlohmann::json{
              {"bound", cr.infinite ? nlohmann::json(nullptr)
                                    : nlohmann::json(cr.bound)},
              {"jensen_floor", cr.jensen_floor},
              {"infinite", cr.infinite}};
        };
        if (all_top && diag.ell_max < diag.kappa_max) {
          json["cramer_rao_topl"] =
              cr_json(CramerRaoTopL(lap, diag.ell_max, diag.kappa_max));
        }
        if (diag.ell_max == 1) {
          int p = data.orders.front().positions().front();
          bool same = true;
          for (const PartialOrder& o : data.orders) {
            same &= o.positions().front() == p;
          }
          if (same) {
            json["cramer_rao_position_p"] =
                cr_json(CramerRaoPositionP(lap, p, diag.kappa_max));
          }
        }
      }
      Deliver(diag_out, json.dump(2) + "\n", out);
      return kExitOk;
    }

    if (ingest->parsed()) {
      std::ostringstream buffer;
      if (ingest_format == "soc") {
        const RankingData rankings =
            ParseSoc(std::filesystem::path(ingest_input));
        PartialOrderData data;
        data.index = rankings.index;
        for (const Ranking& r : rankings.rankings) {
          std::vector<int> positions = ingest_positions;
          if (positions.empty()) {
            const int top = ingest_top > 0 ? ingest_top : r.kappa() - 1;
            for (int p = 1; p <= top; ++p) positions.push_back(p);
          }
          data.orders.push_back(PartialOrderFromRanking(r, positions));
        }
        WritePartialOrdersJsonl(data, buffer);
        err << "ingested " << data.orders.size() << " rankings\n";
      } else {
        const RatingsTable table =
            ParseRatingsCsv(std::filesystem::path(ingest_input));
        const RatingsConversion conv =
            RatingsToPartialOrders(table, ingest_ties);
        WritePartialOrdersJsonl(conv.data, buffer);
        err << "ingested " << conv.data.orders.size() << " users, dropped "
            << conv.dropped_users << " without a separator, replaced "
            << table.duplicates_replaced << " duplicate ratings\n";
      }
      Deliver(ingest_out, buffer.str(), out);
      return kExitOk;
    }
  } catch (const EstimationInfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace rankbreak::cli
