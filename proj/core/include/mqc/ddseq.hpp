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

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mqc/pulse.hpp"
#include "mqc/qmat.hpp"
#include "mqc/spinsys.hpp"

namespace mqc {

enum class Family { XY4, XY8, XY16, UR12, KDD20 };

std::string family_name(Family f);
Family parse_family(std::string_view name);  // throws std::invalid_argument
const std::vector<Family>& all_families();

// Per-family pulse phase lists, loaded from a versioned text file:
//
//   version 1
//   family XY8 phases_deg 0 90 0 90 90 0 90 0
//   note XY8 <free text>
class PhaseTables {
 public:
  static const PhaseTables& builtin();
  static PhaseTables parse(std::string_view text, const std::string& source = "<text>");
  static PhaseTables load(const std::string& path);

  int version() const { return version_; }
  bool has(Family f) const { return phases_.count(f) != 0; }
  const std::vector<double>& phases_deg(Family f) const;
  std::string note(Family f) const;

 private:
  int version_ = 0;
  std::map<Family, std::vector<double>> phases_;
  std::map<Family, std::string> notes_;
};

// One pulse position of a cycle. A modified slot pulses only the doubled
// qubit, twice back to back; the passive qubit idles through it.
struct Slot {
  double phase_deg = 0.0;
  int passive = -1;
  int doubled = -1;
  bool modified() const { return doubled >= 0; }
};

// A DD cycle: slot i of a standard cycle is a pi pulse on every target
// starting at tau/2 + i*(tau + tp). A modified slot lasts 2*tp and delays
// every later slot by tp, so all gaps keep length tau.
struct DDCycle {
  std::string name;
  std::string family;  // phase-table family, or "CPMG"
  double tau_s = 0.0;
  double tp_s = 0.0;
  std::vector<int> targets;  // 0-based
  std::vector<Slot> slots;
  std::vector<PulseEvent> events;
  double duration_s = 0.0;

  bool is_modified() const;
  int modified_slots() const;
  // m-variants only act as the identity in pairs, so they repeat in units of two.
  int repeat_unit() const { return is_modified() ? 2 : 1; }
  double unit_duration_s() const { return repeat_unit() * duration_s; }
  int pulse_count(int qubit) const;  // pi pulses per cycle on qubit
};

DDCycle generate(Family family, double tau_s, double tp_s, const std::vector<int>& targets,
                 const PhaseTables& tables = PhaseTables::builtin());
// All-x train of n pulses, the baseline of the robustness check.
DDCycle generate_cpmg(int n, double tau_s, double tp_s, const std::vector<int>& targets);

struct Modification {
  int slot = -1;     // -1 selects n/2
  int passive = -1;  // -1 selects the first target
  int doubled = -1;  // -1 selects the second target
};

DDCycle modify(const DDCycle& cycle, const Modification& mod = {});

// Pulse width that makes a cycle of n slots (m of them modified) last
// exactly cycle_s: (cycle_s - n*tau) / (n + m). Throws if negative.
double pulse_width_for_cycle(int n_slots, int n_modified, double tau_s, double cycle_s);

// Events of one repeat unit (one cycle, or two for m-variants).
Program unit_program(const DDCycle& cycle);
// Number of repeat units spanning total_s. Throws std::invalid_argument with
// the nearest valid totals when total_s is not commensurate within 1e-9 s.
int units_for(const DDCycle& cycle, double total_s);
Program repeat_to(const DDCycle& cycle, double total_s);

// Coherent propagator of one repeat unit with noise off. With ideal set,
// pulses become error-free and instantaneous at their centers.
Mat8 cycle_propagator(const DDCycle& cycle, const SpinSystem& sys, bool ideal);

// {name, family, tau_s, tp_s, duration_s, targets, slots, events: [{t_s,
// dur_s, targets, phase_deg, flip_deg}]}; targets are 1-based.
nlohmann::json to_json(const DDCycle& cycle);
// Rebuilds the cycle and checks the stored events against it.
DDCycle cycle_from_json(const nlohmann::json& j);

std::string format_table(const DDCycle& cycle);

// Flip-error robustness of a single-qubit cycle. Survival is the fidelity
// to the initial state after the given number of cycles, minimized over
// transverse initial phases and averaged over offsets.
struct RobustnessSetup {
  std::vector<double> offsets_hz{100.0, 250.0, 500.0};
  double tau_s = 0.5e-3;
  double flip_error = 0.05;
  int cycles = 50;
  int qubit = 2;
  int phases = 8;
};

double robustness_survival(const DDCycle& cycle, const RobustnessSetup& setup = {});

struct RobustnessResult {
  Family family;
  double survival = 0.0;
  double cpmg_survival = 0.0;
  bool passes() const { return survival > cpmg_survival; }
};

std::vector<RobustnessResult> robustness_check(const PhaseTables& tables = PhaseTables::builtin(),
                                               const RobustnessSetup& setup = {});

}  // namespace mqc
