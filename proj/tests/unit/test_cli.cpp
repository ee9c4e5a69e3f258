// Copyright 2026 The mqcdd Authors
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

// Drives the installed command-line tool as a subprocess.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#ifdef MQC_CLI

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
};

Outcome mqc(const std::string& args) {
  const std::string cmd = std::string(MQC_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) out += buf;
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("mqc_cli_test_" + name);
  fs::remove_all(d);
  return d;
}

TEST(Cli, Orders) {
  const Outcome r = mqc("orders --json");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["orders"][0][7], 3);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(j["orders"][i][i], 0);
    for (int k = 0; k < 8; ++k) EXPECT_EQ(j["orders"][i][k].get<int>(), -j["orders"][k][i].get<int>());
  }
  EXPECT_NE(mqc("orders").out.find("+3"), std::string::npos);
}

TEST(Cli, Sequences) {
  Outcome r = mqc("sequences --family KDD20 --tau-ms 0.45 --tp-us 50 --targets 1 --json");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["events"].size(), 20u);
  EXPECT_NEAR(j["duration_s"].get<double>(), 20 * (0.45e-3 + 50e-6), 1e-12);

  r = mqc("sequences --family XY8 --tau-ms 0.538 --cycle-s 0.005 --targets 1 2 --modify");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("pulses on qubit 1: 7"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("pulses on qubit 2: 9"), std::string::npos) << r.out;

  EXPECT_EQ(mqc("sequences --family XY9 --tau-ms 1").code, 2);
}

TEST(Cli, SequenceExportImportRoundTrip) {
  const fs::path d = scratch("seq");
  fs::create_directories(d);
  const fs::path f = d / "cycle.json";
  const Outcome a = mqc("sequences --family UR12 --tau-ms 0.33 --tp-us 12 --targets 1 3 --modify --json --export " +
                    f.string());
  ASSERT_EQ(a.code, 0) << a.out;
  const Outcome b = mqc("sequences --import " + f.string() + " --json");
  ASSERT_EQ(b.code, 0) << b.out;
  EXPECT_EQ(a.out, b.out);
  std::ofstream(d / "bad.json") << "{\"name\": 1}";
  EXPECT_EQ(mqc("sequences --import " + (d / "bad.json").string()).code, 2);
}

TEST(Cli, Robustness) {
  const Outcome r = mqc("sequences --robustness");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("KDD20"), std::string::npos);
}

TEST(Cli, Prepare) {
  Outcome r = mqc("prepare --state psi0a");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("rho_35"), std::string::npos) << r.out;
  r = mqc("prepare --state star --nmr");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("fidelity to the star state: 1.0000"), std::string::npos) << r.out;
  EXPECT_EQ(mqc("prepare --state nope").code, 2);
}

TEST(Cli, DecayEmptyStatesIsNoOp) {
  const fs::path d = scratch("empty");
  const Outcome r = mqc("decay -o " + d.string() + " --set run.states=");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(slurp(d / "decay.csv"), "state,protocol,sequence,time_s,value,kind\n");
}

TEST(Cli, DecayDeterministicAndSummarised) {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const std::string args = " --set run.states=psi1b --set run.families=XY8 --set run.points=6";
  ASSERT_EQ(mqc("decay -o " + a.string() + args).code, 0);
  ASSERT_EQ(mqc("decay -o " + b.string() + args).code, 0);
  EXPECT_EQ(slurp(a / "decay.csv"), slurp(b / "decay.csv"));
  const auto s = nlohmann::json::parse(slurp(a / "summary.json"));
  EXPECT_EQ(s["fidelity_convention"].get<std::string>().rfind("squared Uhlmann", 0), 0u);
  EXPECT_TRUE(s["ordering"].contains("skipped"));
  EXPECT_EQ(s["config"]["run"]["states"], "psi1b");
}

TEST(Cli, ConfigErrors) {
  const fs::path d = scratch("cfg");
  fs::create_directories(d);
  std::ofstream(d / "bad.conf") << "[run]\nspeed = 3\n";
  Outcome r = mqc("decay -c " + (d / "bad.conf").string() + " -o " + d.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("bad.conf:2"), std::string::npos) << r.out;
  EXPECT_EQ(mqc("decay -c /nonexistent.conf").code, 2);
  EXPECT_EQ(mqc("decay --set run.points=x").code, 2);
  EXPECT_EQ(mqc("bogus-subcommand").code, 2);
}

TEST(Cli, InvariantViolationExitsThree) {
  // No sequence can win by 99 points, so every ordering fact fails.
  const fs::path d = scratch("strict");
  const Outcome r = mqc("decay --strict -o " + d.string() +
                    " --set run.margin_pp=99 --set run.points=3");
  EXPECT_EQ(r.code, 3) << r.out;
}

TEST(Cli, StarWritesTwoCurves) {
  const fs::path d = scratch("star");
  const Outcome r = mqc("star -o " + d.string() + " --set star.points=4");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto s = nlohmann::json::parse(slurp(d / "star_summary.json"));
  EXPECT_EQ(s["pairs"].size(), 2u);
  EXPECT_EQ(s["pairs"][0]["subsystem"], "rho_AC");
  EXPECT_EQ(s["pairs"][1]["subsystem"], "rho_BC");
  EXPECT_TRUE(fs::exists(d / "star.csv"));
}

TEST(Cli, Tomo) {
  const fs::path d = scratch("tomo");
  const Outcome r = mqc("tomo -o " + d.string() + " --set \"tomo.states=psi3 star\"");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto s = nlohmann::json::parse(slurp(d / "tomo.json"));
  EXPECT_EQ(s["states"].size(), 2u);
  EXPECT_GE(s["states"][1]["fidelity_noiseless"].get<double>(), 0.999);
}

TEST(Cli, ConfigReference) {
  const Outcome r = mqc("config-reference");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("[system]"), std::string::npos);
  EXPECT_NE(r.out.find("gamma_corr_s"), std::string::npos);
}

TEST(Cli, Protect) {
  const Outcome r = mqc("protect --state psi3 --protocol DD3sp --family XY8 --set run.points=3");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("state,protocol,sequence,time_s,value,kind\n", 0), 0u);
}

}  // namespace

#endif
