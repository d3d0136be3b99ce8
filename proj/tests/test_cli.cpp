// Copyright 2026 The bdst Authors
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bdst/edge_list.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI; `merge_stderr` swaps in stderr as the captured stream.
Run cli(const std::string& args, bool capture_stderr = false) {
  const std::string cmd = std::string(BDST_CLI_PATH) + " " + args + (capture_stderr ? " 2>&1 1>/dev/null" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("bdst_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(Cli, CountCompleteFour) {
  const auto path = write("k4.edges", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
  const auto r = cli("count --graph " + path + " --k 2");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "bdst.count/1");
  EXPECT_EQ(j["result"]["c"], "16");
  EXPECT_EQ(j["result"]["c_k"], "12");
}

TEST_F(Cli, CountStar) {
  const auto path = write("star13.edges", "4 3\n0 1\n0 2\n0 3\n");
  const auto r = cli("count --graph " + path + " --k 2");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["result"]["c"], "1");
  EXPECT_EQ(j["result"]["c_k"], "0");
}

TEST_F(Cli, CountHistogramSumsToTotal) {
  const auto r = cli("count --gen complete:n=5 --k 3 --histogram");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out)["result"];
  EXPECT_EQ(j["c"], "125");
  EXPECT_EQ(j["c_k"], "120");
  EXPECT_EQ(j["c_by_max_degree"]["2"], "60");
  EXPECT_EQ(j["c_by_max_degree"]["4"], "5");
}

TEST_F(Cli, MissingFileIsConfigError) {
  const auto r = cli("count --graph " + (dir_ / "nope.edges").string() + " --k 2", true);
  EXPECT_EQ(r.code, 2);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "bdst.error/1");
  EXPECT_EQ(j["exit_code"], 2);
  EXPECT_NE(j["message"].get<std::string>().find("file not found"), std::string::npos);
}

TEST_F(Cli, MalformedEdgeListIsConfigError) {
  const auto path = write("bad.edges", "3 2\n0 1\n1 1\n");
  EXPECT_EQ(cli("count --graph " + path + " --k 2").code, 2);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("count --gen complete:n=4 --k 2 --bogus").code, 2);
  EXPECT_EQ(cli("count").code, 2);
  EXPECT_EQ(cli("estimate --gen complete:n=3 --k 3 --trials 0").code, 2);
  EXPECT_EQ(cli("count --gen nonsense:n=4 --k 2").code, 2);
  EXPECT_EQ(cli("generate --gen complete:n=4 --k 3 --K 2 --probs 0.5,0.6").code, 2);
}

TEST_F(Cli, FailedHypothesisExitsOne) {
  const auto r = cli("bound --n 100 --r 20 --k 3", true);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out)["error"], "precondition");
}

TEST_F(Cli, EstimateTriangleExact) {
  const auto r = cli("estimate --gen complete:n=3 --k 3 --s 3 --ell 3 --exact --trials 1000");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out)["result"];
  EXPECT_EQ(j["exact"]["total"], "8");
  EXPECT_EQ(j["exact"]["favorable"], "8");
  EXPECT_EQ(j["successes"], 1000);
}

TEST_F(Cli, StochasticCommandsAreByteIdentical) {
  const std::vector<std::string> cmds{
      "estimate --gen regular:n=60,r=12 --k 4 --trials 3000 --seed 9",
      "generate --gen regular:n=60,r=12 --k 4 --runs 40 --K 5 --seed 9",
      "nibble --gen regular:n=100,r=30 --k 4 --runs 6 --seed 9",
      "nibble --gen regular:n=80,r=24 --k 3 --K 6 --runs 4 --seed 9",
  };
  for (const auto& c : cmds) {
    const auto a = cli(c + " --threads 1");
    const auto b = cli(c + " --threads 1");
    const auto d = cli(c + " --threads 4");
    ASSERT_EQ(a.code, 0) << c;
    EXPECT_EQ(a.out, b.out) << c;
    EXPECT_EQ(a.out, d.out) << c;
    EXPECT_EQ(json::parse(a.out)["config"]["seed"], 9) << c;
  }
}

TEST_F(Cli, TimingIsOptIn) {
  EXPECT_EQ(cli("count --gen complete:n=4 --k 2").out.find("wall_time"), std::string::npos);
  EXPECT_NE(cli("count --gen complete:n=4 --k 2 --timing").out.find("wall_time"), std::string::npos);
}

TEST_F(Cli, OutFileMatchesStdout) {
  const auto path = (dir_ / "report.json").string();
  const auto a = cli("estimate --gen cycle:n=6 --k 3 --trials 500 --seed 3");
  ASSERT_EQ(cli("estimate --gen cycle:n=6 --k 3 --trials 500 --seed 3 --out " + path).code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), a.out);
}

TEST_F(Cli, GenerateCompleteFour) {
  const auto trees = dir_ / "trees";
  const auto r = cli("generate --gen complete:n=4 --k 3 --runs 100 --seed 2 --trees " + trees.string());
  ASSERT_EQ(r.code, 0);
  const auto g = json::parse(r.out)["result"]["generation"];
  EXPECT_EQ(g["runs"], 100);
  EXPECT_EQ(g["invalid"], 0);
  EXPECT_LE(g["distinct"].get<int>(), 16);
  EXPECT_GT(g["produced"].get<int>(), 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(trees)) {
    ++files;
    std::ifstream in(e.path());
    const auto t = bdst::read_edge_list(in);
    EXPECT_EQ(t.num_vertices(), 4);
    EXPECT_EQ(t.num_edges(), 3);
    EXPECT_LE(t.max_degree(), 3);
  }
  EXPECT_EQ(files, g["distinct"].get<int>());
}

TEST_F(Cli, GenerateOnTightConstructionEmitsNothing) {
  const auto r = cli("generate --gen tight:k=3,t=7 --k 3 --runs 20");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out)["result"];
  EXPECT_EQ(j["generation"]["produced"], 0);
  EXPECT_EQ(j["certificate"], 0);
}

TEST_F(Cli, ConstantsCsv) {
  const auto r = cli("constants --k 5..11 --format csv");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,f_k,g_k,z_k,z_star_k");
  const double expected[] = {0.843148, 0.962200, 0.991935, 0.998565, 0.999783, 0.999971, 0.999997};
  int row = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 5u);
    EXPECT_EQ(std::stoi(cells[0]), 5 + row);
    EXPECT_NEAR(std::stod(cells[3]), expected[row], 1e-6);
    ++row;
  }
  EXPECT_EQ(row, 7);
}

TEST_F(Cli, ConstructTight) {
  const auto path = (dir_ / "tight.edges").string();
  const auto r = cli("construct --variant tight --k 2 --t 7 --edges " + path);
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out)["result"];
  EXPECT_EQ(j["graph"]["n"], 22);
  EXPECT_EQ(j["r"], 5);
  EXPECT_EQ(j["certificate"], 0);
  std::ifstream in(path);
  const auto g = bdst::read_edge_list(in);
  EXPECT_EQ(g.num_vertices(), 22);
  EXPECT_EQ(g.regular_degree(), 5);
}

TEST_F(Cli, ConstructRejectsBadParameters) {
  EXPECT_EQ(cli("construct --variant tight --k 2 --t 5").code, 2);
  EXPECT_EQ(cli("construct --variant tight --k 2 --t 9 --parity odd").code, 2);
  EXPECT_EQ(cli("construct --variant bipartite --n 7 --k 2").code, 2);
  EXPECT_EQ(cli("construct --variant bipartite --n 10 --k 4").code, 0);
}

TEST_F(Cli, TextAndCsvFormats) {
  const auto text = cli("count --gen complete:n=4 --k 2 --format text");
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("result.c_k: 12"), std::string::npos);
  const auto csv = cli("count --gen complete:n=4 --k 2 --format csv");
  ASSERT_EQ(csv.code, 0);
  EXPECT_NE(csv.out.find("result.c_k,12"), std::string::npos);
}

}  // namespace
