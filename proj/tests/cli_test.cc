// Copyright 2026 The onoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli/app.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/run_config.h"
#include "json.hpp"

namespace onoff::cli {
namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = RunCli(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(CliLimit, FcZeroBackground) {
  const auto o = Invoke({"limit", "--method", "fc", "--n-obs", "0", "--b", "0",
                      "--cl", "0.9", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_NEAR(j["summary"]["upper"].get<double>(), 2.44, 0.02);
  EXPECT_EQ(j["summary"]["lower"].get<double>(), 0.0);
  EXPECT_EQ(j["config"]["method"], "fc");
  EXPECT_EQ(j["config"]["cl"].get<double>(), 0.9);
}

TEST(CliLimit, OnOffSysRuns) {
  const auto o = Invoke({"limit", "--method", "bayes-onoff-sys", "--n-obs", "360",
                      "--n-bg", "270", "--tau", "3", "--sigma", "0.03", "--cl",
                      "0.9", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_GT(j["summary"]["upper"].get<double>(), 270.0);
  EXPECT_EQ(j["config"]["sigma_rel"].get<double>(), 0.03);
}

TEST(CliValidation, MissingOffCountIsNamed) {
  const auto o = Invoke({"limit", "--method", "bayes-onoff", "--n-obs", "10",
                      "--tau", "3"});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("--n-bg"), std::string::npos) << o.err;
  EXPECT_TRUE(o.out.empty());
}

TEST(CliValidation, EveryProblemIsListed) {
  const auto o = Invoke({"limit", "--method", "bayes-onoff", "--cl", "1.5"});
  EXPECT_EQ(o.code, 1);
  for (const char* flag : {"--n-obs", "--n-bg", "--tau", "--cl"}) {
    EXPECT_NE(o.err.find(flag), std::string::npos) << flag << "\n" << o.err;
  }
}

TEST(CliValidation, FractionalCountsRejected) {
  const auto o = Invoke({"limit", "--method", "fc", "--n-obs", "1.5", "--b", "0"});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("--n-obs"), std::string::npos);
  EXPECT_EQ(Invoke({"limit", "--method", "fc", "--n-obs", "-2", "--b", "0"}).code, 1);
}

TEST(CliValidation, UnknownMethodAndFlags) {
  EXPECT_EQ(Invoke({"limit", "--method", "magic", "--n-obs", "1", "--b", "0"}).code, 1);
  EXPECT_EQ(Invoke({"limit", "--bogus-flag", "3"}).code, 1);
  EXPECT_EQ(Invoke({}).code, 1);
  EXPECT_EQ(Invoke({"--help"}).code, 0);
}

TEST(CliValidation, NumericalFailureExitCode) {
  const auto o = Invoke({"limit", "--method", "fc", "--n-obs", "30", "--b", "3",
                      "--s-max", "2"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("extend"), std::string::npos) << o.err;
}

TEST(CliScan, CsvEmbedsConfigAndIsByteStable) {
  const std::vector<std::string> args = {
      "scan", "--method", "fc,bayes-poisson", "--b", "3", "--n-from", "0",
      "--n-to", "6", "--format", "csv"};
  auto first = args;
  first.insert(first.end(), {"--threads", "2", "-o", "scan_a.csv"});
  auto second = args;
  second.insert(second.end(), {"--threads", "1", "-o", "scan_b.csv"});
  ASSERT_EQ(Invoke(first).code, 0);
  ASSERT_EQ(Invoke(second).code, 0);
  const std::string a = Slurp("scan_a.csv");
  EXPECT_EQ(a, Slurp("scan_b.csv"));
  EXPECT_NE(a.find("# method=fc,bayes-poisson"), std::string::npos) << a;
  EXPECT_NE(a.find("# grid_points=auto"), std::string::npos);
  EXPECT_NE(a.find("n_obs,method,lower,upper"), std::string::npos);
  EXPECT_NE(a.find("\n0,fc,0,1.075,"), std::string::npos) << a;
  int rows = 0;
  std::istringstream in(a);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#' && line[0] != 'n') ++rows;
  }
  EXPECT_EQ(rows, 14);
}

TEST(CliScan, OrderingRowsForOnOffFamily) {
  const auto o = Invoke({"scan", "--method", "bayes-poisson,bayes-onoff", "--b",
                      "90", "--n-bg", "270", "--tau", "3", "--n-from", "80",
                      "--n-to", "100", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  const auto& rows = j["rows"];
  ASSERT_EQ(rows.size(), 42u);
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    EXPECT_EQ(rows[i]["method"], "bayes-poisson");
    EXPECT_GE(rows[i + 1]["upper"].get<double>(), rows[i]["upper"].get<double>());
  }
}

TEST(CliConfigFile, MatchesFlags) {
  {
    std::ofstream cfg("limit.ini");
    cfg << "method=fc\nn-obs=0\nb=3\ncl=0.9\nformat=csv\n";
  }
  const auto from_file = Invoke({"limit", "--config", "limit.ini"});
  const auto from_flags = Invoke({"limit", "--method", "fc", "--n-obs", "0", "--b",
                               "3", "--cl", "0.9", "--format", "csv"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(from_file.out, from_flags.out);
  EXPECT_NE(from_file.out.find("\nupper,1.075\n"), std::string::npos)
      << from_file.out;
}

TEST(CliBelt, ExportImportRoundTrip) {
  ASSERT_EQ(Invoke({"belt", "--b", "3", "--s-max", "4", "--s-step", "0.01",
                 "--format", "csv", "-o", "belt_a.csv"})
                .code,
            0);
  const auto o = Invoke({"belt", "--input", "belt_a.csv", "--n-obs", "0",
                      "--format", "csv", "-o", "belt_b.csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::string a = Slurp("belt_a.csv");
  const std::string b = Slurp("belt_b.csv");
  const auto body = [](const std::string& s) {
    return s.substr(s.find("# onoff confidence belt"));
  };
  EXPECT_EQ(body(a), body(b));
  // Intervals read off a stored belt are the raw construction.
  EXPECT_NE(b.find("# result.upper=0.95"), std::string::npos) << b;
  EXPECT_NE(b.find("# input=belt_a.csv"), std::string::npos);
}

TEST(CliSignificance, LimaExample) {
  const auto o = Invoke({"significance", "--method", "lima", "--n-obs", "120",
                      "--n-bg", "270", "--tau", "3", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_NEAR(j["summary"]["s_value"].get<double>(), 2.571, 1e-3);
}

TEST(CliToys, SignificanceHistogram) {
  const auto o = Invoke({"toys", "--study", "significance", "--method",
                      "onoff-sys", "--trials", "300", "--b-true", "90", "--tau",
                      "3", "--sigma", "0.03", "--seed", "5", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["rows"].size(), 81u);
  long total = 0;
  for (const auto& row : j["rows"]) total += row["count"].get<long>();
  total += j["summary"]["underflow"].get<long>() + j["summary"]["overflow"].get<long>();
  EXPECT_EQ(total, 300);
  EXPECT_EQ(j["config"]["seed"].get<long>(), 5);
}

TEST(CliThreads, EnvironmentSetsDefault) {
  ::setenv("ONOFF_THREADS", "3", 1);
  EXPECT_EQ(DefaultThreads(), 3u);
  ::setenv("ONOFF_THREADS", "zero", 1);
  EXPECT_GE(DefaultThreads(), 1u);
  ::unsetenv("ONOFF_THREADS");
}

}  // namespace
}  // namespace onoff::cli
