// Copyright 2026 The benfrag Authors
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

#include "cli.hpp"

#include <fmt/core.h>
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace benfrag::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("benfrag_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const std::string& name, const std::string& body) {
    const auto path = dir_ / name;
    std::ofstream(path) << body;
    return path.string();
  }

  int invoke(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  json stdout_json() const { return json::parse(out_.str()); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

constexpr const char* kRational = R"({"exponents": [{"rational": [-1, 3]}, {"rational": [-1, 2]}]})";
constexpr const char* kIrrational =
    R"({"exponents": [{"rational": [-1, 2]}, {"real": -1.4142135623730951}]})";

TEST_F(CliTest, ClassifyPredictions) {
  ASSERT_EQ(invoke({"classify", "--config", config("r.json", kRational)}), kExitOk);
  EXPECT_EQ(stdout_json()["classification"]["prediction"], "NonBenford");

  ASSERT_EQ(invoke({"classify", "--config", config("i.json", kIrrational)}), kExitOk);
  auto j = stdout_json();
  EXPECT_EQ(j["classification"]["prediction"], "Benford");
  EXPECT_EQ(j["classification"]["exponents"][1]["verdict"], "PresumedIrrational");

  ASSERT_EQ(invoke({"classify", "--config", config("h.json", R"({"proportions": [0.5]})")}), kExitOk);
  j = stdout_json();
  EXPECT_EQ(j["classification"]["exponents"][0]["value"], 0.0);
  EXPECT_EQ(j["classification"]["prediction"], "NonBenford");
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(invoke({"classify", "--config", config("bad.json", R"({"proportions": [0.5, 0.6]})")}),
            kExitConfig);
  EXPECT_EQ(invoke({"classify", "--config", (dir_ / "missing.json").string()}), kExitConfig);
  EXPECT_EQ(invoke({"classify"}), kExitConfig);
  EXPECT_EQ(invoke({"frobnicate"}), kExitConfig);
  EXPECT_EQ(invoke({"analyze", "--config", config("r.json", kRational), "--N", "3", "--measure", "x",
                    "--out", (dir_ / "o").string()}),
            kExitConfig);
  EXPECT_EQ(invoke({"residues", "--config", config("i.json", kIrrational), "--N", "3"}), kExitConfig);
}

TEST_F(CliTest, AnalyzeWritesRunDirectory) {
  const auto out = dir_ / "run";
  ASSERT_EQ(invoke({"analyze", "--config", config("r.json", kRational), "--N", "1000", "--out", out.string()}),
            kExitOk);
  auto j = stdout_json();
  EXPECT_LE(j["report"]["distinct_residues"].get<int>(), 6);
  EXPECT_EQ(j["report"]["verdict"], "Inconsistent");
  EXPECT_EQ(j["prediction"], "NonBenford");
  EXPECT_TRUE(j["agrees"].get<bool>());
  for (const char* f : {"report.json", "distribution.csv", "digits.csv", "manifest.json"}) {
    ASSERT_TRUE(fs::exists(out / f)) << f;
    EXPECT_GT(fs::file_size(out / f), 0u) << f;
  }
  auto manifest = json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["outputs"].size(), 3u);
  EXPECT_TRUE(manifest.contains("timestamp"));
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(slurp(out / "distribution.csv").rfind("residue,mass\n", 0), 0u);
}

TEST_F(CliTest, AnalyzeIrrationalAndEmptyTree) {
  ASSERT_EQ(invoke({"analyze", "--config", config("i.json", kIrrational), "--N", "1000", "--out",
                    (dir_ / "a").string()}),
            kExitOk);
  EXPECT_EQ(stdout_json()["report"]["verdict"], "ConsistentWithBenford");

  ASSERT_EQ(invoke({"analyze", "--config", config("i.json", kIrrational), "--N", "0", "--out",
                    (dir_ / "b").string()}),
            kExitOk);
  auto j = stdout_json();
  EXPECT_EQ(j["report"]["distinct_residues"], 1);
  EXPECT_EQ(j["report"]["leading_digits"][0], 1.0);
}

TEST_F(CliTest, AnalyzeAgreesWithClassifyOnAppendixConfigs) {
  struct Case {
    const char* body;
    int N;
    bool agrees;
  };
  const std::vector<Case> cases = {
      {R"({"exponents": [{"rational": [-1, 3]}, {"rational": [-1, 2]}]})", 1000, true},
      {R"({"exponents": [{"rational": [-1, 4]}, {"rational": [-1, 6]}]})", 1000, true},
      {R"({"exponents": [{"rational": [-1, 2]}, {"rational": [-1, 3]}, {"rational": [-1, 4]}]})", 100, true},
      {R"({"exponents": [{"rational": [-1, 4]}, {"rational": [-1, 2]}, {"rational": [-1, 6]}]})", 100, true},
      {R"({"exponents": [{"rational": [-1, 2]}, {"real": -1.4142135623730951}]})", 1000, true},
      {R"({"exponents": [{"rational": [-1, 3]}, {"real": -1.7320508075688772}]})", 1000, true},
      // The rational tail (lcm 12) still dominates at N = 100: ks is 0.043.
      {R"({"exponents": [{"real": -1.4142135623730951}, {"rational": [-1, 3]}, {"rational": [-1, 4]}]})", 100, false},
      {R"({"exponents": [{"real": -1.7320508075688772}, {"rational": [-1, 10]}, {"rational": [-1, 8]}]})", 100, true},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto cfg = config(fmt::format("a{}.json", i), cases[i].body);
    ASSERT_EQ(invoke({"analyze", "--config", cfg, "--N", std::to_string(cases[i].N), "--out",
                      (dir_ / fmt::format("a{}", i)).string()}),
              kExitOk);
    EXPECT_EQ(stdout_json()["agrees"].get<bool>(), cases[i].agrees) << i;
  }
}

TEST_F(CliTest, AnalyzeLengthInvariance) {
  ASSERT_EQ(invoke({"analyze", "--config", config("i.json", kIrrational), "--N", "200", "--length", "3.7",
                    "--out", (dir_ / "a").string()}),
            kExitOk);
  auto j = stdout_json();
  EXPECT_TRUE(j["length_check"]["invariant"].get<bool>());
  EXPECT_EQ(invoke({"analyze", "--config", config("i.json", kIrrational), "--N", "2", "--length", "-1",
                    "--out", (dir_ / "b").string()}),
            kExitConfig);
}

TEST_F(CliTest, ResourceGuardsExitThree) {
  EXPECT_EQ(invoke({"analyze", "--config", config("i.json", kIrrational), "--N", "1000", "--cap", "1000",
                    "--out", (dir_ / "a").string()}),
            kExitResource);
  EXPECT_NE(err_.str().find("simulate"), std::string::npos);
  EXPECT_EQ(invoke({"brute", "--config", config("r.json", kRational), "--N", "40"}), kExitResource);
}

TEST_F(CliTest, BrutePasses) {
  ASSERT_EQ(invoke({"brute", "--config", config("p.json", R"({"proportions": [0.3, 0.3, 0.4]})"), "--N", "8",
                    "--out", (dir_ / "b").string()}),
            kExitOk);
  EXPECT_TRUE(stdout_json()["passed"].get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / "b" / "leaves.csv"));
  ASSERT_EQ(invoke({"brute", "--config", config("p.json", R"({"proportions": [0.3, 0.3, 0.4]})"), "--N", "8",
                    "--measure", "length"}),
            kExitOk);
}

TEST_F(CliTest, ResiduesCommand) {
  ASSERT_EQ(invoke({"residues", "--config", config("r.json", kRational), "--N", "6", "--out",
                    (dir_ / "r").string()}),
            kExitOk);
  auto j = stdout_json();
  EXPECT_EQ(j["count"], 6);
  EXPECT_EQ(j["denominator_lcm"], 6);
  EXPECT_EQ(slurp(dir_ / "r" / "residues.csv").rfind("numerator,denominator_lcm,mass\n", 0), 0u);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const auto cfg = config("i.json", kIrrational);
  auto args = [&](const std::string& out, const std::string& threads) {
    return std::vector<std::string>{"simulate", "--config", cfg, "--N", "50", "--samples", "20000",
                                    "--seed", "77", "--threads", threads, "--out", (dir_ / out).string()};
  };
  ASSERT_EQ(invoke(args("a", "1")), kExitOk);
  ASSERT_EQ(invoke(args("b", "1")), kExitOk);
  ASSERT_EQ(invoke(args("c", "3")), kExitOk);
  for (const char* f : {"samples.csv", "distribution.csv", "digits.csv", "report.json", "metadata.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "c" / f)) << f;
  }
  auto meta = json::parse(slurp(dir_ / "a" / "metadata.json"));
  EXPECT_EQ(meta["seed"], 77);
  EXPECT_TRUE(meta.contains("generator"));
}

TEST_F(CliTest, SimulateRandomProportions) {
  ASSERT_EQ(invoke({"simulate", "--concentration", "1,2,3", "--N", "30", "--samples", "5000", "--out",
                    (dir_ / "s").string()}),
            kExitOk);
  EXPECT_EQ(stdout_json()["samples"], 5000);
  EXPECT_EQ(invoke({"simulate", "--N", "3", "--out", (dir_ / "t").string()}), kExitConfig);
}

}  // namespace
}  // namespace benfrag::cli
