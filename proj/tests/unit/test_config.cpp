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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mqc/config.hpp"
#include "mqc/errors.hpp"
#include "mqc/run_config.hpp"

namespace mqc {
namespace {

TEST(ConfigDocument, ParseAndOrigins) {
  const auto d = ConfigDocument::parse("# c\n[a]\nx = 1 ; tail\n\n[b]\ny = two words\n", "f.conf");
  EXPECT_EQ(d.at("a", "x").value, "1");
  EXPECT_EQ(d.at("a", "x").origin, "f.conf:3");
  EXPECT_EQ(d.at("b", "y").value, "two words");
  EXPECT_EQ(d.find("a", "z"), nullptr);
  EXPECT_THROW(d.at("a", "z"), ConfigError);
}

TEST(ConfigDocument, Errors) {
  EXPECT_THROW(ConfigDocument::parse("x = 1\n", "f"), ConfigError);
  EXPECT_THROW(ConfigDocument::parse("[a]\nx = 1\nx = 2\n", "f"), ConfigError);
  EXPECT_THROW(ConfigDocument::parse("[a]\njunk\n", "f"), ConfigError);
  EXPECT_THROW(ConfigDocument::load("/nonexistent/file.conf"), ConfigError);
}

TEST(ConfigDocument, OverridesSplitAtLastDot) {
  ConfigDocument d;
  d.apply_override("tau_ms.psi0a.mXY8=0.6");
  EXPECT_EQ(d.at("tau_ms.psi0a", "mXY8").value, "0.6");
  EXPECT_THROW(d.apply_override("novalue"), ConfigError);
  EXPECT_THROW(d.apply_override("nodot=1"), ConfigError);
}

TEST(ConfigReaders, TypedValues) {
  const ConfigEntry r{"1.5", "x"};
  EXPECT_DOUBLE_EQ(to_real(r, "r"), 1.5);
  EXPECT_THROW(to_real({"1.5x", "x"}, "r"), ConfigError);
  EXPECT_EQ(to_integer({"12", "x"}, "i"), 12);
  EXPECT_THROW(to_integer({"1.2", "x"}, "i"), ConfigError);
  EXPECT_TRUE(to_bool({"true", "x"}, "b"));
  EXPECT_FALSE(to_bool({"off", "x"}, "b"));
  EXPECT_THROW(to_bool({"maybe", "x"}, "b"), ConfigError);
  EXPECT_EQ(to_reals({"1, 2 3", "x"}, "v", 3), std::vector<double>({1, 2, 3}));
  EXPECT_THROW(to_reals({"1 2", "x"}, "v", 3), ConfigError);
  EXPECT_EQ(to_words({"a, b  c", "x"}), std::vector<std::string>({"a", "b", "c"}));
}

TEST(RunConfig, Defaults) {
  const RunConfig c = load_run_config("", {});
  EXPECT_EQ(c.states.size(), 7u);
  EXPECT_EQ(c.families.size(), 4u);
  EXPECT_DOUBLE_EQ(c.t_end_s, 0.7);
  EXPECT_DOUBLE_EQ(c.system.offsets_hz[0], 500.0);
  EXPECT_DOUBLE_EQ(c.system.couplings_hz[2], -192.0);
  EXPECT_DOUBLE_EQ(c.cycle_s.at("mXY8"), 0.005);
  EXPECT_DOUBLE_EQ(c.tau_s.at("psi0a").at("mXY8"), 0.538e-3);
  EXPECT_DOUBLE_EQ(c.star.tau13_s, 0.563e-3);
  EXPECT_DOUBLE_EQ(c.star.tau23_s, 0.540e-3);
}

TEST(RunConfig, UnknownKeysRejectedWithOrigin) {
  try {
    load_run_config("", {"system.bogus=1"});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("--set"), std::string::npos);
  }
  EXPECT_THROW(load_run_config("", {"nosuch.key=1"}), ConfigError);
  EXPECT_THROW(load_run_config("", {"run.states=psi0a psi9"}), ConfigError);
  EXPECT_THROW(load_run_config("", {"run.states=star"}), ConfigError);
  EXPECT_THROW(load_run_config("", {"system.gamma_s=-1 0 0"}), ConfigError);
}

TEST(RunConfig, EmptyStateList) {
  const RunConfig c = load_run_config("", {"run.states="});
  EXPECT_TRUE(c.states.empty());
  EXPECT_TRUE(run_grid(c).curves.empty());
}

TEST(RunConfig, ProtocolEnumeration) {
  const RunConfig c = load_run_config("", {});
  const auto& cat = StateCatalog::builtin();
  EXPECT_EQ(protocols_for(c, cat.get("psi3")).size(), 1u + 4u);
  EXPECT_EQ(protocols_for(c, cat.get("psi1a")).size(), 1u + 8u);
  EXPECT_EQ(protocols_for(c, cat.get("psi0a")).size(), 1u + 12u);
  const RunConfig missing = load_run_config("", {"run.families=XY4"});
  EXPECT_THROW(protocols_for(missing, cat.get("psi3")), ConfigError);
}

TEST(RunConfig, ReferenceListsEveryKey) {
  const std::string ref = config_reference();
  for (const auto& k : config_schema()) {
    // Per-label keys are documented once under their section heading.
    const std::string needle = k.key == "<sequence>" ? "[" + k.section + "]" : k.key;
    EXPECT_NE(ref.find(needle), std::string::npos) << k.section << "." << k.key;
  }
}

}  // namespace
}  // namespace mqc
