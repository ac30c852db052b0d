// Copyright 2026 The cvteleport Authors
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


#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CVTELEPORT_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 512> buf{};
  while (p && std::fgets(buf.data(), buf.size(), p)) out += buf.data();
  const int raw = p ? pclose(p) : -1;
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

double field(const std::string& out, const std::string& key) {
  const auto at = out.find(key + "=");
  if (at == std::string::npos) return -1.0;
  return std::stod(out.substr(at + key.size() + 1));
}

TEST(CliTest, FidelityBaseline) {
  const auto r = run("fidelity --input coherent --r 0.5 --eta 1 --nth 0 --op none");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NEAR(field(r.out, "fidelity"), 0.731059, 1e-6);
}

TEST(CliTest, ZeroProbabilityExitsTwo) {
  const auto r = run("fidelity --op ps --order 1 --T 1.0 --eta 1 --nth 0 --r 0");
  EXPECT_EQ(r.status, 2) << r.out;
}

TEST(CliTest, CatalysisAtUnitTransmissivityMatchesBaseline) {
  const auto pc = run("fidelity --op pc --order 1 --T 1 --strategy ng-nc --r 0.7 "
                      "--eta 0.6 --nth 0.1");
  const auto nc = run("fidelity --op none --r 0.7 --eta 0.6 --nth 0.1");
  ASSERT_EQ(pc.status, 0) << pc.out;
  ASSERT_EQ(nc.status, 0) << nc.out;
  EXPECT_NEAR(field(pc.out, "fidelity"), field(nc.out, "fidelity"), 1e-10);
}

TEST(CliTest, BadFlagsNameTheFlag) {
  auto r = run("fidelity --r -1");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("--r"), std::string::npos) << r.out;
  r = run("fidelity --r 0.5 --eta 1.5");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("--eta"), std::string::npos) << r.out;
  r = run("fidelity --r 0.5 --op xyz");
  EXPECT_EQ(r.status, 2);
  r = run("bogus");
  EXPECT_EQ(r.status, 2);
}

TEST(CliTest, Crossover) {
  auto r = run("crossover --r 0.1 --nth 0.1");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NEAR(field(r.out, "eta_star"), 0.37, 0.03);
  r = run("crossover --r 0.1 --nth 1e-5");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.out.find("indistinguishable curves"), std::string::npos) << r.out;
  r = run("crossover --r 0.1 --nth 0.1 --eta-lo 0.9 --eta-hi 0.2");
  EXPECT_EQ(r.status, 3);
}

TEST(CliTest, Validate) {
  auto r = run("validate quick");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("result=PASS"), std::string::npos);
  r = run("validate enormous");
  EXPECT_EQ(r.status, 2) << r.out;
}

TEST(CliTest, SweepWritesIdenticalCsv) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cvteleport_cli_test";
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({
    "input": {"kind": "coherent"},
    "sweep_axis": "eta",
    "fixed": {"r": 0.5, "nth": [0.1, 1e-5]},
    "axis_grid": {"start": 0.5, "stop": 1.0, "step": 0.25},
    "operations": [{"kind": "ps", "order": 1, "strategy": "nc-ng"}]
  })";
  const auto a = run("sweep --config " + cfg.string() + " --out " + (dir / "a.csv").string());
  const auto b = run("sweep --config " + cfg.string() + " --out " + (dir / "b.csv").string());
  ASSERT_EQ(a.status, 0) << a.out;
  ASSERT_EQ(b.status, 0) << b.out;
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  const std::string csv = slurp(dir / "a.csv");
  EXPECT_EQ(csv, slurp(dir / "b.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 2 * 3);

  std::ofstream(cfg) << R"({"input": {"kind": "coherent"}, "sweep_axis": "eta",
    "fixed": {"r": 0.5, "nth": 0.1}, "axis_grid": {"start": 0.5, "stop": 1.0,
    "step": 0.25}, "operations": []})";
  const auto bad = run("sweep --config " + cfg.string());
  EXPECT_EQ(bad.status, 4);
  EXPECT_NE(bad.out.find("$.operations"), std::string::npos) << bad.out;
  fs::remove_all(dir);
}

}  // namespace
