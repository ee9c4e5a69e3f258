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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mqc/circuits.hpp"
#include "mqc/ddseq.hpp"
#include "mqc/spinsys.hpp"

namespace mqc {

enum class ProtocolKind { FreeEv, DD1sp, DD2sp, DD3sp, mDD2sp };

std::string kind_name(ProtocolKind k);
ProtocolKind parse_kind(std::string_view name);
int target_count(ProtocolKind k);  // 0 for FreeEv

struct Protocol {
  ProtocolKind kind = ProtocolKind::FreeEv;
  Family family = Family::XY8;
  double tau_s = 0.0;
  double tp_s = 0.0;
  std::vector<int> targets;  // 0-based
  Modification modification;

  static Protocol free_evolution();
  // Pulse width chosen so one cycle lasts cycle_s.
  static Protocol dd(ProtocolKind kind, Family family, double tau_s, double cycle_s, std::vector<int> targets,
                     Modification mod = {}, const PhaseTables& tables = PhaseTables::builtin());

  void validate() const;
  // "free", a family name, or "m" + family name.
  std::string sequence_label() const;
  DDCycle cycle(const PhaseTables& tables = PhaseTables::builtin()) const;
};

struct DecayCurve {
  std::string state;
  std::string protocol;
  std::string sequence;
  std::string kind;  // "amplitude" or "concurrence"
  int row = -1;
  int col = -1;
  std::vector<int> subsystem;  // concurrence curves: kept qubits
  std::vector<double> times_s;
  std::vector<double> values;
  // Amplitude curves: Re(rho_el(t) / rho_el(0)), which also shows the
  // coherent phase the magnitude hides.
  std::vector<double> inphase;
};

// Prepares the state, evolves it under the protocol (averaging over disorder
// shots when enabled) and records |rho_el(t)| / |rho_el(0)|. DD times must
// be whole numbers of repeat units.
DecayCurve run_decay(const StateSpec& state, const Protocol& protocol, const SpinSystem& sys,
                     const std::vector<double>& times_s, int threads = 1);
DecayCurve run_decay(const std::string& state_id, const Protocol& protocol, const SpinSystem& sys,
                     const std::vector<double>& times_s, int threads = 1);

struct Percent {
  double value = 0.0;
  bool interpolated = false;
};

// 100 * C(t); linear interpolation between grid points is flagged.
Percent percent_at(const DecayCurve& curve, double t_s);

// t_k = round(k * M / (points - 1)) * unit for k = 0..points-1, M = t_end / unit.
std::vector<double> commensurate_grid(double unit_s, double t_end_s, int points);
std::vector<double> uniform_grid(double t_end_s, int points);
std::vector<double> protocol_grid(const Protocol& p, double t_end_s, int points);

// Percent of coherence preserved per state and sequence at a fixed time.
class ReferenceTable {
 public:
  static const ReferenceTable& builtin();
  static ReferenceTable parse(std::string_view json_text, const std::string& source = "<text>");

  double time_s() const { return time_s_; }
  std::vector<std::string> states() const;
  std::vector<std::string> sequences(const std::string& state) const;  // "free" for free evolution
  bool has(const std::string& state, const std::string& sequence) const;
  double percent(const std::string& state, const std::string& sequence) const;  // throws
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  double time_s_ = 0.0;
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, double>>>> cells_;
  std::vector<std::string> notes_;
};

// Percent preserved at the comparison time for one state/protocol/sequence.
struct CellResult {
  std::string state;
  ProtocolKind kind = ProtocolKind::FreeEv;
  std::string sequence;
  double percent = 0.0;
};

enum class Verdict { Holds, Fails, NotApplicable };
std::string verdict_name(Verdict v);

struct OrderingFact {
  std::string state;
  char fact = '?';
  std::string claim;
  ProtocolKind winner = ProtocolKind::FreeEv;
  ProtocolKind loser = ProtocolKind::FreeEv;
  std::string winner_sequence;  // best sequence of the winning protocol
  double winner_percent = 0.0;
  std::string loser_sequence;
  double loser_percent = 0.0;
  double margin_pp = 0.0;
  Verdict verdict = Verdict::NotApplicable;
};

struct OrderingReport {
  double margin_pp = 0.0;
  std::vector<OrderingFact> facts;

  bool all_hold() const;
  std::string format() const;
  nlohmann::json to_json() const;
};

// Best-of-sequences comparison of two protocols on one state; NotApplicable
// when both are the same protocol. Throws if either has no result.
OrderingFact compare_protocols(const std::vector<CellResult>& results, const std::string& state,
                               ProtocolKind winner, ProtocolKind loser, double margin_pp);

// Checks the qualitative facts per state:
//  (a) the state's DD protocol beats free evolution (orders 1, 2, 3),
//  (b) mDD2sp beats DD3sp (orders 0 and 2),
//  (c) DD1sp beats DD3sp (order 1),
//  (d) DD3sp keeps at least margin_pp percent of order-3 coherence.
// Percentages themselves are never compared with the table. Throws
// std::invalid_argument naming any table cell without a result.
OrderingReport compare_to_reference(const std::vector<CellResult>& results, const ReferenceTable& table,
                                    double margin_pp = 5.0, const StateCatalog& catalog = StateCatalog::builtin());

// The protocol tracking a state in the reference table: DD1sp, mDD2sp or DD3sp.
ProtocolKind reference_protocol(const StateSpec& state);

struct StarOptions {
  Family family = Family::XY8;
  double cycle_s = 0.005;
  bool nmr_prep = false;
  bool tomography = false;
  TomographyOptions tomo;
  int threads = 1;
};

struct StarCurves {
  std::vector<int> pair;  // 0-based, (0,2) or (1,2)
  DecayCurve free;
  DecayCurve protected_curve;
};

// Concurrence of the pair's reduced state under free evolution and under
// the paired mDD cycle on that pair.
StarCurves star_protection(const SpinSystem& sys, const std::vector<int>& pair, double tau_s,
                           const std::vector<double>& times_s, const StarOptions& opts = {});

DensityMatrix star_initial_state(const SpinSystem& sys, bool nmr_prep);

// Target qubits a protocol uses for a state: the coherence-bearing qubit
// (DD1sp), the two differing-bit qubits (DD2sp, mDD2sp) or all three (DD3sp).
std::vector<int> protocol_targets(ProtocolKind kind, const StateSpec& state);

// CSV with columns state,protocol,sequence,time_s,value,kind. Amplitude
// curves also emit their in-phase samples as kind "inphase".
void write_csv(std::ostream& out, const std::vector<DecayCurve>& curves, bool header = true);

}  // namespace mqc
