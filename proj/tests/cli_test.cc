// Copyright 2026 The wpir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace wpir::cli {
namespace {

using ::testing::HasSubstr;
using ::testing::Not;
using ::testing::StartsWith;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> DataLines(const std::string& text) {
  std::vector<std::string> out;
  for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipEmpty())) {
    if (!line.empty() && line.front() != '#') out.emplace_back(line);
  }
  return out;
}

TEST(CliTest, EnumerateListsZtslMembers) {
  Result r = Invoke({"enumerate", "--scheme", "ztsl", "-M", "2", "-N", "3", "-K",
                  "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, StartsWith("# wpir enumerate\n# scheme=ztsl\n"));
  EXPECT_THAT(DataLines(r.out),
              ::testing::ElementsAre("cardinality,3", "index,strategy",
                                     "1,0 0", "2,1 2", "3,2 1"));
}

TEST(CliTest, EnumerateElidesLargeAlphabets) {
  Result zyqt = Invoke({"enumerate", "--scheme", "zyqt", "-M", "3", "-N", "5",
                     "-K", "3"});
  ASSERT_EQ(zyqt.code, kExitOk);
  EXPECT_THAT(zyqt.out, HasSubstr("cardinality,216000\n"));
  EXPECT_THAT(zyqt.out, HasSubstr("# members elided"));
  Result olr = Invoke({"enumerate", "--scheme", "olr", "-M", "3", "-N", "5", "-K",
                    "3"});
  ASSERT_EQ(olr.code, kExitOk);
  EXPECT_THAT(olr.out, HasSubstr("cardinality,1500\n"));
}

TEST(CliTest, TableHasOneRowPerQueryAndFile) {
  Result r = Invoke({"table", "--scheme", "ztsl", "-M", "2", "-N", "3", "-K", "2",
                  "--server", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("# D(z) = z1 + 3\n"));
  std::vector<std::string> rows = DataLines(r.out);
  ASSERT_EQ(rows.size(), 1u + 18);
  EXPECT_EQ(rows[0], "server,query,m,coefficients,length");

  Result olr = Invoke({"table", "--scheme", "olr", "-M", "2", "-N", "3", "-K",
                    "2"});
  ASSERT_EQ(olr.code, kExitOk);
  EXPECT_EQ(DataLines(olr.out).size(), 1u + 36);

  Result single = Invoke({"table", "--scheme", "zyqt", "-M", "1", "-N", "3", "-K",
                       "2"});
  ASSERT_EQ(single.code, kExitOk);
  for (const std::string& row : DataLines(single.out)) {
    if (row.rfind("server", 0) == 0) continue;
    std::vector<std::string> cells = absl::StrSplit(row, ',');
    ASSERT_EQ(cells.size(), 5u);
    EXPECT_EQ(cells[2], "1");
  }
}

TEST(CliTest, TradeoffEndpoints) {
  Result r = Invoke({"tradeoff", "--scheme", "olr", "-M", "2", "-N", "3", "-K",
                  "2", "--targets", "1.5,2,4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::vector<std::string> rows = DataLines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0],
            "scheme,M,N,K,D_target,D_achieved,leakage_bits,leakage_normalized,"
            "rate");
  EXPECT_EQ(rows[1], "olr,2,3,2,1.5,infeasible,,,");
  std::vector<std::string> low = absl::StrSplit(rows[2], ',');
  EXPECT_NEAR(std::stod(low[8]), 1.0, 1e-9);
  std::vector<std::string> high = absl::StrSplit(rows[3], ',');
  EXPECT_NEAR(std::stod(high[6]), 0.0, 1e-9);
  EXPECT_NEAR(std::stod(high[8]), 0.6, 1e-9);
}

TEST(CliTest, OutputsAreByteIdentical) {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"tradeoff", "--scheme", "zyqt", "-M", "2",
                                 "-N", "3", "-K", "2", "--grid", "8"},
        std::vector<std::string>{"simulate", "--scheme", "olr", "-M", "2",
                                 "-N", "3", "-K", "2", "--samples", "50",
                                 "--seed", "9"},
        std::vector<std::string>{"verify", "--scheme", "olr", "-M", "3", "-N",
                                 "3", "-K", "2", "--samples", "200"}}) {
    Result a = Invoke(args);
    Result b = Invoke(args);
    EXPECT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
}

TEST(CliTest, VerifyPassesForAllSchemes) {
  for (std::string scheme : {"zyqt", "ztsl", "olr"}) {
    Result r = Invoke({"verify", "--scheme", scheme, "-M", "2", "-N", "3", "-K",
                    "2", "--exhaustive"});
    EXPECT_EQ(r.code, kExitOk) << scheme << "\n" << r.out;
    EXPECT_THAT(r.out, HasSubstr("result,PASS,"));
    EXPECT_THAT(r.out, Not(HasSubstr(",FAIL,")));
  }
}

TEST(CliTest, CorruptGeneratorFailsVerification) {
  Result r = Invoke({"verify", "--scheme", "zyqt", "-M", "2", "-N", "3", "-K",
                  "2", "--corrupt-generator"});
  EXPECT_EQ(r.code, kExitVerificationFailed);
  EXPECT_THAT(r.out, HasSubstr("mds,FAIL,generator violates the MDS property"));
  EXPECT_THAT(r.out, HasSubstr("result,FAIL,"));
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"enumerate"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"enumerate", "--scheme", "pir"}).code, kExitUsage);
  Result k_too_big =
      Invoke({"enumerate", "--scheme", "zyqt", "-N", "3", "-K", "3"});
  EXPECT_EQ(k_too_big.code, kExitUsage);
  EXPECT_THAT(k_too_big.err, HasSubstr("N > K"));
  EXPECT_TRUE(k_too_big.out.empty());
  EXPECT_EQ(Invoke({"verify", "--scheme", "olr", "--field", "4"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"simulate", "--scheme", "olr", "--pmf", "1,2"}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST(CliTest, ConfigFileAndOutPath) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() /
                              ("wpir_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::filesystem::path config = dir / "instance.ini";
  {
    std::ofstream f(config);
    f << "scheme=ztsl\nfiles=2\nservers=3\ndim=2\n";
  }
  std::filesystem::path out = dir / "table.csv";
  Result r = Invoke({"table", "--config", config.string(), "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  std::stringstream contents;
  contents << in.rdbuf();
  EXPECT_THAT(contents.str(), HasSubstr("# scheme=ztsl\n"));
  EXPECT_EQ(DataLines(contents.str()).size(), 19u);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, PlotScript) {
  std::filesystem::path script = std::filesystem::temp_directory_path() /
                                 ("wpir_plot_" + std::to_string(::getpid()) +
                                  ".py");
  Result r = Invoke({"tradeoff", "--scheme", "ztsl", "-M", "2", "-N", "3", "-K",
                  "2", "--grid", "4", "--plot-script", script.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(script);
  std::stringstream contents;
  contents << in.rdbuf();
  EXPECT_THAT(contents.str(), HasSubstr("matplotlib"));
  std::filesystem::remove(script);
}

}  // namespace
}  // namespace wpir::cli
