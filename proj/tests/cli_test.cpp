// Copyright 2026 The ddos-embed Authors
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

// Runs the ddos-embed executable as a subprocess.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs `command` through the shell; stdout and stderr are captured together
// unless the command redirects them itself.
RunResult Shell(const std::string& command) {
  RunResult r;
  FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ddos_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    // Two 6-cliques joined by a bridge, plus node 12 hanging off node 0.
    std::ofstream out(dir_ / "toy.edges");
    out << "# toy graph\n";
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < 6; ++i) {
        for (int j = i + 1; j < 6; ++j) out << 6 * c + i << ' ' << 6 * c + j << '\n';
      }
    }
    out << "5 6\n0 12\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Bin() const { return std::string(DDOS_EMBED_BIN); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, TrainWritesHeaderCurveAndManifest) {
  const RunResult r = Shell(Bin() + " train --graph " + Path("toy.edges") +
                          " --d 3 --epochs 5 --seed 7 --out " + Path("emb.txt") +
                          " --curve " + Path("curve.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const std::string emb = Slurp(dir_ / "emb.txt");
  EXPECT_EQ(emb.substr(0, emb.find('\n')), "13 3");
  const std::string curve = Slurp(dir_ / "curve.csv");
  EXPECT_EQ(curve.substr(0, curve.find('\n')), "step,loss");
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 6);

  const auto manifest = nlohmann::json::parse(Slurp(dir_ / "emb.txt.manifest.json"));
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["seeds"], nlohmann::json::array({7}));
  EXPECT_EQ(manifest["seed_source"], "flag");
  EXPECT_EQ(manifest["config"]["d"], 3);
  EXPECT_EQ(manifest["input"]["bytes"], fs::file_size(dir_ / "toy.edges"));

  const RunResult sha = Shell("sha256sum " + Path("toy.edges"));
  ASSERT_EQ(sha.exit_code, 0);
  EXPECT_EQ(manifest["input"]["sha256"], sha.output.substr(0, 64));
}

TEST_F(Cli, TrainIsByteIdenticalPerSeed) {
  const std::string common = Bin() + " train --graph " + Path("toy.edges") +
                             " --d 4 --epochs 20 --seed 7 --out ";
  ASSERT_EQ(Shell(common + Path("a.txt")).exit_code, 0);
  ASSERT_EQ(Shell(common + Path("b.txt")).exit_code, 0);
  EXPECT_EQ(Slurp(dir_ / "a.txt"), Slurp(dir_ / "b.txt"));
}

TEST_F(Cli, EntropySeedIsRecorded) {
  const RunResult r = Shell(Bin() + " train --graph " + Path("toy.edges") +
                          " --epochs 1 --out " + Path("e.txt"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto manifest = nlohmann::json::parse(Slurp(dir_ / "e.txt.manifest.json"));
  EXPECT_EQ(manifest["seed_source"], "entropy");
  EXPECT_EQ(manifest["seeds"].size(), 1u);
}

TEST_F(Cli, MissingGraphExitsOneNamingPath) {
  const RunResult r = Shell(Bin() + " train --graph " + Path("nope.edges") + " --out " +
                          Path("x.txt"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find(Path("nope.edges")), std::string::npos) << r.output;
}

TEST_F(Cli, BadConfigExitsOne) {
  std::ofstream(dir_ / "bad.cfg") << "d = sixteen\n";
  const RunResult r = Shell(Bin() + " train --graph " + Path("toy.edges") + " --config " +
                          Path("bad.cfg") + " --out " + Path("x.txt"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("line 1"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("'d'"), std::string::npos) << r.output;
}

TEST_F(Cli, FlagsOverrideConfigFile) {
  std::ofstream(dir_ / "c.cfg") << "d = 5\nepochs = 2\n";
  const RunResult r = Shell(Bin() + " train --graph " + Path("toy.edges") + " --config " +
                          Path("c.cfg") + " --d 2 --seed 1 --out " + Path("o.txt"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const std::string emb = Slurp(dir_ / "o.txt");
  EXPECT_EQ(emb.substr(0, emb.find('\n')), "13 2");
  const auto manifest = nlohmann::json::parse(Slurp(dir_ / "o.txt.manifest.json"));
  EXPECT_EQ(manifest["config"]["epochs"], 2);
}

TEST_F(Cli, NumericalAbortExitsTwo) {
  const RunResult r = Shell(Bin() + " train --graph " + Path("toy.edges") +
                          " --lr 1e308 --init-scale 1 --seed 0 --out " + Path("x.txt"));
  EXPECT_EQ(r.exit_code, 2) << r.output;
  EXPECT_NE(r.output.find("step"), std::string::npos) << r.output;
}

TEST_F(Cli, GradCheckPassesAndNegativeControlFails) {
  RunResult r = Shell(Bin() + " gradcheck --configs 20");
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("max_rel_err"), std::string::npos);
  EXPECT_NE(r.output.find("< 1e-4"), std::string::npos);

  r = Shell(Bin() + " gradcheck --nb 2 --configs 20");
  EXPECT_EQ(r.exit_code, 0) << r.output;

  r = Shell(Bin() + " gradcheck --configs 5 --inject-sign-flip");
  EXPECT_EQ(r.exit_code, 3) << r.output;
}

TEST_F(Cli, LinkPredSweepWritesOneRowPerDimension) {
  // The linear encoder needs d <= n, so d = 32 takes a larger graph: a
  // 40-node ring with chords to the next two nodes.
  {
    std::ofstream out(dir_ / "ring.edges");
    for (int i = 0; i < 40; ++i) {
      out << i << ' ' << (i + 1) % 40 << '\n' << i << ' ' << (i + 2) % 40 << '\n';
    }
  }
  const RunResult r = Shell(Bin() + " linkpred --graph " + Path("ring.edges") +
                          " --d 4,8,16,32 --epochs 3 --seed 1 --name toy --out " +
                          Path("lp"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  std::ifstream in(dir_ / "lp" / "aggregate.csv");
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "dataset,d,seed,auc,wall_s");
  EXPECT_EQ(rows[1].rfind("toy,4,1,", 0), 0u) << rows[1];
  EXPECT_EQ(rows[4].rfind("toy,32,1,", 0), 0u) << rows[4];

  const auto run = nlohmann::json::parse(Slurp(dir_ / "lp" / "runs" / "toy_d8_seed1.json"));
  EXPECT_EQ(run["d"], 8);
  EXPECT_GE(run["auc"].get<double>(), 0.0);
  EXPECT_LE(run["auc"].get<double>(), 1.0);
  EXPECT_EQ(run["features"], "concat");
  EXPECT_EQ(run["loss_curve"]["step"].size(), 3u);
  EXPECT_TRUE(fs::exists(dir_ / "lp" / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "lp" / "manifest.json"));
  // stdout carries the summary table.
  EXPECT_NE(r.output.find("auc_mean"), std::string::npos) << r.output;
}

TEST_F(Cli, UnknownSubcommandExitsOne) {
  EXPECT_NE(Shell(Bin() + " frobnicate").exit_code, 0);
}

}  // namespace
