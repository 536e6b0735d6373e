//
// Copyright 2026 The SPriFed Authors
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
//

// Drives the sprifed executable end to end.

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sprifed_cli_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the CLI with `args`, returning its exit code; stdout and stderr go to
  // a log file in the scratch directory.
  int Cli(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " " SPRIFED_CLI_PATH " " + args + " > " +
                            Path("log.txt") + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string Log() const { return Read(Path("log.txt")); }

  static std::string Read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void WriteConfig(const std::string& name, const std::string& body) const {
    std::ofstream(Path(name)) << body;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenDataWritesCsv) {
  ASSERT_EQ(Cli("gen-data --out " + Path("d.csv") + " --n 30 --p 8 --s 2 --seed 4"), 0)
      << Log();
  const std::string csv = Read(Path("d.csv"));
  EXPECT_EQ(csv.rfind("x_0,x_1,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 31);
}

TEST_F(CliTest, RunThenReport) {
  WriteConfig("exp.toml",
              "n = 100\np = 40\ns = 3\nn_test = 100\n"
              "algos = [\"omp\", \"sprifed_omp\", \"dp_gcd\"]\n"
              "mu_p = 0.8\ntrials = 2\nmaster_seed = 1\noutput = \"" +
                  Path("res.jsonl") + "\"\n");
  ASSERT_EQ(Cli("run --config " + Path("exp.toml")), 0) << Log();
  const std::string jsonl = Read(Path("res.jsonl"));
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 6);
  ASSERT_EQ(Cli("report " + Path("res.jsonl") + " --out " + Path("sum.csv")), 0)
      << Log();
  EXPECT_THAT(Log(), HasSubstr("sprifed_omp"));
  EXPECT_THAT(Read(Path("sum.csv")), HasSubstr("config_index,algo,n,p,s,trials"));
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  WriteConfig("exp.toml",
              "n = 80\np = 30\ns = 2\nn_test = 60\n"
              "algos = [\"sprifed_omp\", \"sprifed_omp_grad\", \"dp_sgd_l1\"]\n"
              "mu_p = 0.6\ntrials = 2\nmaster_seed = 5\n");
  ASSERT_EQ(Cli("run --config " + Path("exp.toml") + " --out " + Path("a.jsonl")), 0)
      << Log();
  ASSERT_EQ(Cli("run --config " + Path("exp.toml") + " --jobs 2 --out " +
                Path("b.jsonl")),
            0)
      << Log();
  EXPECT_EQ(Read(Path("a.jsonl")), Read(Path("b.jsonl")));

  ASSERT_EQ(Cli("run --config " + Path("exp.toml") + " --out " + Path("c.jsonl"),
                "SPRIFED_SEED=6"),
            0)
      << Log();
  EXPECT_NE(Read(Path("a.jsonl")), Read(Path("c.jsonl")));
}

TEST_F(CliTest, SweepWritesOneBlockPerValue) {
  WriteConfig("exp.toml",
              "n = 60\np = 20\ns = 2\nn_test = 40\nalgos = [\"omp\"]\n"
              "trials = 1\n");
  ASSERT_EQ(Cli("sweep --config " + Path("exp.toml") + " --axis n --values 40,60,80" +
                " --out " + Path("sw.jsonl")),
            0)
      << Log();
  const std::string jsonl = Read(Path("sw.jsonl"));
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 3);
  EXPECT_THAT(jsonl, HasSubstr("\"config_index\":2"));
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli(""), 2);
  EXPECT_EQ(Cli("frobnicate"), 2);
  EXPECT_EQ(Cli("gen-data --n 10"), 2);
  WriteConfig("bad.toml", "n = 10\nunknown_key = 1\n");
  EXPECT_EQ(Cli("run --config " + Path("bad.toml")), 2);
  EXPECT_THAT(Log(), HasSubstr("unknown_key"));
  WriteConfig("exp.toml", "n = 60\np = 20\ns = 2\nalgos = [\"omp\"]\n");
  EXPECT_EQ(Cli("sweep --config " + Path("exp.toml") + " --axis lambda --values 1"), 2);
}

TEST_F(CliTest, OtherFailuresExitOne) {
  EXPECT_EQ(Cli("report " + Path("missing.jsonl")), 1);
  EXPECT_EQ(Cli("gen-data --out " + Path("d.csv") + " --n 5 --p 3 --s 4"), 1);
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(Cli("--help"), 0);
  EXPECT_THAT(Log(), HasSubstr("gen-data"));
}

}  // namespace
