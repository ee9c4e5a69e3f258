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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "criteria.hpp"
#include "mqc/ddseq.hpp"
#include "mqc/errors.hpp"
#include "oracles.hpp"

namespace mqc {
namespace {

SpinSystem ideal_system() {
  SpinSystem s;
  s.noise = {};
  return s;
}

TEST(PhaseTables, Counts) {
  const auto& t = PhaseTables::builtin();
  EXPECT_EQ(t.phases_deg(Family::XY4).size(), 4u);
  EXPECT_EQ(t.phases_deg(Family::XY8).size(), 8u);
  EXPECT_EQ(t.phases_deg(Family::XY16).size(), 16u);
  EXPECT_EQ(t.phases_deg(Family::UR12).size(), 12u);
  EXPECT_EQ(t.phases_deg(Family::KDD20).size(), 20u);
  EXPECT_GE(t.version(), 1);
}

TEST(PhaseTables, XY8Balanced) {
  int x = 0;
  int y = 0;
  for (double p : PhaseTables::builtin().phases_deg(Family::XY8)) (std::fmod(p, 180.0) == 0.0 ? x : y)++;
  EXPECT_EQ(x, y);
}

TEST(PhaseTables, UR12QuadraticRule) {
  const auto& p = PhaseTables::builtin().phases_deg(Family::UR12);
  for (int k = 1; k <= 12; ++k) {
    const double expected = std::fmod((k - 1) * (k - 2) / 2 * 60.0, 360.0);
    EXPECT_NEAR(std::fmod(p[k - 1], 360.0), expected, 1e-12) << k;
  }
}

TEST(PhaseTables, KDD20Blocks) {
  const auto& p = PhaseTables::builtin().phases_deg(Family::KDD20);
  const double base[5] = {30, 0, 90, 0, 30};
  const double shift[4] = {0, 90, 0, 90};
  for (int b = 0; b < 4; ++b)
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(std::fmod(base[i] + shift[b], 360.0), p[5 * b + i], 1e-12);
}

TEST(PhaseTables, ParseErrors) {
  EXPECT_THROW(PhaseTables::parse("family XY8 phases_deg 0 90\n", "t"), ConfigError);
  EXPECT_THROW(PhaseTables::parse("version 1\nfamily BOGUS phases_deg 0\n", "t"), ConfigError);
  const auto t = PhaseTables::parse("version 2\nfamily XY4 phases_deg 0 90 0 90\n", "t");
  EXPECT_EQ(t.version(), 2);
  EXPECT_FALSE(t.has(Family::XY8));
}

TEST(Generate, CountsAndTiming) {
  for (Family f : all_families()) {
    const DDCycle c = generate(f, 0.5e-3, 20e-6, {2});
    const int n = static_cast<int>(PhaseTables::builtin().phases_deg(f).size());
    ASSERT_EQ(static_cast<int>(c.events.size()), n);
    EXPECT_NEAR(c.duration_s, n * (0.5e-3 + 20e-6), 1e-15);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(c.events[i].center_s(), (i + 0.5) * (0.5e-3 + 20e-6), 1e-15);
      // time symmetry about the cycle midpoint
      EXPECT_NEAR(c.events[i].center_s() + c.events[n - 1 - i].center_s(), c.duration_s, 1e-15);
    }
  }
  EXPECT_THROW(generate(Family::XY8, 0.0, 0.0, {0}), std::invalid_argument);
  EXPECT_THROW(parse_family("XY7"), std::invalid_argument);
}

TEST(Modify, PulseCounts) {
  const DDCycle m = modify(generate(Family::XY8, 0.5e-3, 20e-6, {0, 2}));
  EXPECT_EQ(m.name, "mXY8");
  EXPECT_EQ(m.pulse_count(0), 7);
  EXPECT_EQ(m.pulse_count(2), 9);
  EXPECT_EQ(m.repeat_unit(), 2);
  EXPECT_NEAR(m.duration_s, 8 * (0.5e-3 + 20e-6) + 20e-6, 1e-15);
}

TEST(Modify, Errors) {
  const DDCycle one = generate(Family::XY8, 0.5e-3, 0.0, {0});
  EXPECT_THROW(modify(one), std::invalid_argument);
  const DDCycle m = modify(generate(Family::XY8, 0.5e-3, 0.0, {0, 1}), {3, -1, -1});
  EXPECT_THROW(modify(m, {3, -1, -1}), std::invalid_argument);
  EXPECT_THROW(modify(generate(Family::XY8, 0.5e-3, 0.0, {0, 1}), {8, -1, -1}), std::out_of_range);
}

TEST(Modify, PairIsIdentity) {
  const auto r = criteria::modified_cycles_identity();
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(CyclePropagator, StandardCyclesIdentityWithoutHamiltonian) {
  SpinSystem s = ideal_system();
  s.offsets_hz = {0, 0, 0};
  s.couplings_hz = {0, 0, 0};
  for (Family f : all_families())
    for (std::vector<int> t : {std::vector<int>{1}, {0, 2}, {0, 1, 2}})
      EXPECT_LE(oracle::phase_distance(cycle_propagator(generate(f, 0.3e-3, 10e-6, t), s, true), Mat8::Identity()),
                1e-10);
}

TEST(CyclePropagator, Refocusing) {
  const auto r = criteria::refocusing();
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(CyclePropagator, PulsedQubitDecouples) {
  // One ideal cycle on qubit q leaves that qubit untouched: the propagator
  // commutes with every operator acting on q alone.
  const SpinSystem s = ideal_system();
  const Mat2 ops[3] = {(Mat2() << 0, 1, 1, 0).finished(), (Mat2() << 0, cd(0, -1), cd(0, 1), 0).finished(),
                       (Mat2() << 1, 0, 0, -1).finished()};
  for (Family f : {Family::XY8, Family::XY16, Family::UR12, Family::KDD20})
    for (int q = 0; q < 3; ++q) {
      const Mat8 u = cycle_propagator(generate(f, 0.4e-3, 0.0, {q}), s, true);
      for (const auto& o : ops) {
        const Mat8 e = oracle::embed(q, o);
        EXPECT_LE((u * e - e * u).cwiseAbs().maxCoeff(), 1e-9) << family_name(f) << " q" << q;
      }
    }
}

TEST(Timing, PulseWidthForCycle) {
  EXPECT_NEAR(pulse_width_for_cycle(8, 0, 0.58e-3, 0.005), (0.005 - 8 * 0.58e-3) / 8, 1e-18);
  EXPECT_NEAR(pulse_width_for_cycle(8, 1, 0.538e-3, 0.005), (0.005 - 8 * 0.538e-3) / 9, 1e-18);
  EXPECT_THROW(pulse_width_for_cycle(8, 0, 1e-3, 0.005), std::invalid_argument);
}

TEST(Timing, RepeatTo) {
  const DDCycle c = generate(Family::XY8, 0.58e-3, pulse_width_for_cycle(8, 0, 0.58e-3, 0.005), {0});
  EXPECT_NEAR(c.duration_s, 0.005, 1e-15);
  EXPECT_EQ(units_for(c, 0.7), 140);
  EXPECT_EQ(repeat_to(c, 0.7).events.size(), 140u * 8u);
  EXPECT_TRUE(repeat_to(c, 0.0).events.empty());
  EXPECT_THROW(units_for(c, 0.7012), std::invalid_argument);
  const DDCycle k = generate(Family::KDD20, 0.45e-3, pulse_width_for_cycle(20, 0, 0.45e-3, 0.01), {0});
  EXPECT_EQ(units_for(k, 0.7), 70);
  const DDCycle m = modify(generate(Family::XY8, 0.538e-3, pulse_width_for_cycle(8, 1, 0.538e-3, 0.005), {0, 1}));
  EXPECT_EQ(units_for(m, 0.7), 70);  // pairs of 0.005 s cycles
  EXPECT_THROW(units_for(m, 0.005), std::invalid_argument);
}

TEST(Timing, NonCommensurateMessageListsNeighbours) {
  const DDCycle c = generate(Family::XY8, 0.5e-3, 0.0, {0});
  try {
    units_for(c, 0.0061);
    FAIL();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("0.004"), std::string::npos) << msg;
    EXPECT_NE(msg.find("0.008"), std::string::npos) << msg;
  }
}

TEST(Json, RoundTrip) {
  for (Family f : all_families()) {
    for (bool m : {false, true}) {
      DDCycle c = generate(f, 0.41e-3, 13e-6, {0, 2});
      if (m) c = modify(c, {1, 2, 0});
      const DDCycle back = cycle_from_json(nlohmann::json::parse(to_json(c).dump()));
      EXPECT_EQ(back.name, c.name);
      ASSERT_EQ(back.events.size(), c.events.size());
      for (std::size_t k = 0; k < c.events.size(); ++k) {
        EXPECT_EQ(back.events[k].start_s, c.events[k].start_s);
        EXPECT_EQ(back.events[k].targets, c.events[k].targets);
        EXPECT_EQ(back.events[k].phases_rad, c.events[k].phases_rad);
      }
      EXPECT_EQ(back.duration_s, c.duration_s);
    }
  }
}

TEST(Json, TamperedEventsRejected) {
  auto j = to_json(generate(Family::XY8, 0.5e-3, 0.0, {0}));
  j["events"][3]["phase_deg"][0] = 45.0;
  EXPECT_THROW(cycle_from_json(j), ConfigError);
  EXPECT_THROW(cycle_from_json(nlohmann::json::object()), ConfigError);
}

TEST(Robustness, Gate) {
  const auto r = criteria::robustness_gate();
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Robustness, ErrorFreeSurvivalIsOne) {
  RobustnessSetup s;
  s.flip_error = 0.0;
  EXPECT_NEAR(robustness_survival(generate(Family::XY8, s.tau_s, 0.0, {s.qubit}), s), 1.0, 1e-9);
}

TEST(Format, TableMentionsEveryPulse) {
  const std::string t = format_table(modify(generate(Family::XY8, 0.5e-3, 20e-6, {0, 2})));
  EXPECT_NE(t.find("mXY8"), std::string::npos);
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n') >= 9, true);
}

}  // namespace
}  // namespace mqc
