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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rankbreak/io.h"

namespace rankbreak::cli {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rankbreak");
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("rankbreak_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

constexpr char kOrders[] =
    R"({"offering":["a","b","c"],"positions":[1,2],"blocks":[[],["a"],[],["b"],["c"]]})"
    "\n"
    R"({"offering":["b","c","a"],"positions":[1],"blocks":[[],["b"],["a","c"]]})"
    "\n"
    R"({"offering":["c","a"],"positions":[1],"blocks":[[],["c"],["a"]]})"
    "\n";

TEST_F(CliTest, SimulateIsByteDeterministic) {
  const std::vector<std::string> args = {
      "simulate", "--d", "10", "--n", "60", "--kappa", "4", "--ell", "2",
      "--trials", "2", "--seed", "3", "--b", "1"};
  const CliRun a = Invoke(args);
  const CliRun b = Invoke(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("scenario_id,axis,", 0), 0u);
  std::istringstream in(a.out);
  EXPECT_EQ(ParseCsv(in).size(), 2u);
}

TEST_F(CliTest, BenchEmitsOneRowPerValue) {
  const CliRun r = Invoke({"bench", "--axis", "n", "--values", "40,80", "--d",
                        "8", "--kappa", "3", "--ell", "1", "--trials", "1",
                        "--b", "1", "--scheme", "optimal,uniform"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  EXPECT_EQ(ParseCsv(in).size(), 5u);
}

TEST_F(CliTest, ValidationErrors) {
  EXPECT_EQ(Invoke({"simulate", "--d", "5", "--kappa", "9"}).code,
            kExitValidation);
  EXPECT_EQ(Invoke({"simulate", "--no-such-flag"}).code, kExitValidation);
  EXPECT_EQ(Invoke({"simulate", "--placement", "sideways"}).code,
            kExitValidation);
  EXPECT_EQ(Invoke({}).code, kExitValidation);
}

TEST_F(CliTest, MissingFileIsIoError) {
  const CliRun r = Invoke({"fit", "--data", Path("absent.jsonl")});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, MalformedDataIsValidationError) {
  WriteFile(Path("bad.jsonl"), "{not json\n");
  EXPECT_EQ(Invoke({"fit", "--data", Path("bad.jsonl")}).code,
            kExitValidation);
}

TEST_F(CliTest, FitAndDiagnose) {
  WriteFile(Path("orders.jsonl"), kOrders);
  const CliRun fit = Invoke({"fit", "--data", Path("orders.jsonl"), "--b", "2"});
  ASSERT_EQ(fit.code, kExitOk) << fit.err;
  const nlohmann::json j = nlohmann::json::parse(fit.out);
  EXPECT_TRUE(j.contains("utilities"));
  const CliRun diag =
      Invoke({"diagnose", "--data", Path("orders.jsonl"), "--b", "1"});
  ASSERT_EQ(diag.code, kExitOk) << diag.err;
  const nlohmann::json d = nlohmann::json::parse(diag.out);
  EXPECT_TRUE(d.contains("diagnostics"));
  EXPECT_TRUE(d.contains("sample_complexity"));
}

TEST_F(CliTest, RestrictedWithoutPairsIsInfeasible) {
  WriteFile(Path("top.jsonl"),
            R"({"offering":["a","b","c","d"],"positions":[1],"blocks":[[],["a"],["b","c","d"]]})"
            "\n");
  const CliRun r = Invoke({"fit", "--data", Path("top.jsonl"), "--estimator",
                        "restricted-bottom", "--reference", "d,c,b,a",
                        "--restricted-size", "2"});
  EXPECT_EQ(r.code, kExitInfeasible) << r.err;
}

TEST_F(CliTest, IngestSocToJsonl) {
  WriteFile(Path("votes.soc"), "x,y,z\n2: y,x,z\n");
  const CliRun r = Invoke({"ingest", "--format", "soc", "--input",
                        Path("votes.soc"), "--out", Path("votes.jsonl"),
                        "--ell", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const PartialOrderData data =
      ParsePartialOrdersJsonl(std::filesystem::path(Path("votes.jsonl")));
  ASSERT_EQ(data.orders.size(), 2u);
  EXPECT_EQ(data.orders[0].positions(), std::vector<int>({1}));
}

}  // namespace
}  // namespace rankbreak::cli
