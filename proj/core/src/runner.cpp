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

#include "mqc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mqc/data.hpp"
#include "mqc/errors.hpp"
#include "mqc/parallel.hpp"

namespace mqc {

namespace {

constexpr double kStateTol = 1e-9;

void check_state(const Mat8& m, const std::string& where) {
  try {
    DensityMatrix(Mat(m)).check(kStateTol, kStateTol);
  } catch (const InvariantError& e) {
    throw InvariantError(where + ": " + e.what());
  }
}

// Ensemble-averaged states at the requested unit counts.
std::vector<Mat8> evolve_dd(const Mat8& rho0, const DDCycle& cycle, const SpinSystem& sys,
                            const std::vector<int>& units, int threads) {
  const auto shots = disorder_realizations(sys);
  const int max_units = units.empty() ? 0 : *std::max_element(units.begin(), units.end());
  const Program unit = unit_program(cycle);
  std::vector<std::vector<Mat8>> per_shot(shots.size(), std::vector<Mat8>(units.size()));
  parallel_for(static_cast<int>(shots.size()), threads, [&](int s) {
    CompiledProgram prog(shots[s], unit);
    Mat8 rho = rho0;
    for (int u = 0; u <= max_units; ++u) {
      for (std::size_t k = 0; k < units.size(); ++k)
        if (units[k] == u) per_shot[s][k] = rho;
      if (u < max_units) prog.apply_in_place(rho);
    }
  });
  std::vector<Mat8> avg(units.size(), Mat8::Zero());
  for (const auto& shot : per_shot)
    for (std::size_t k = 0; k < units.size(); ++k) avg[k] += shot[k];
  for (auto& m : avg) m /= static_cast<double>(shots.size());
  return avg;
}

std::vector<Mat8> evolve(const Mat8& rho0, const Protocol& p, const SpinSystem& sys,
                         const std::vector<double>& times, int threads) {
  p.validate();
  sys.validate();
  for (double t : times)
    if (!(t >= 0.0)) throw std::invalid_argument("sample times must be >= 0");
  if (p.kind == ProtocolKind::FreeEv) {
    std::vector<Mat8> out;
    const DensityMatrix r0{Mat(rho0)};
    for (double t : times) out.emplace_back(free_propagate_averaged(r0, sys, t).matrix());
    return out;
  }
  const DDCycle cycle = p.cycle();
  std::vector<int> units;
  for (double t : times) units.push_back(units_for(cycle, t));
  return evolve_dd(rho0, cycle, sys, units, threads);
}

std::string format_pct(double v) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(2) << v;
  return o.str();
}

}  // namespace

std::string kind_name(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::FreeEv: return "FreeEv";
    case ProtocolKind::DD1sp: return "DD1sp";
    case ProtocolKind::DD2sp: return "DD2sp";
    case ProtocolKind::DD3sp: return "DD3sp";
    case ProtocolKind::mDD2sp: return "mDD2sp";
  }
  throw std::invalid_argument("unknown protocol kind");
}

ProtocolKind parse_kind(std::string_view name) {
  for (auto k : {ProtocolKind::FreeEv, ProtocolKind::DD1sp, ProtocolKind::DD2sp, ProtocolKind::DD3sp,
                 ProtocolKind::mDD2sp})
    if (kind_name(k) == name) return k;
  throw std::invalid_argument("unknown protocol '" + std::string(name) +
                              "' (expected FreeEv, DD1sp, DD2sp, DD3sp or mDD2sp)");
}

int target_count(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::FreeEv: return 0;
    case ProtocolKind::DD1sp: return 1;
    case ProtocolKind::DD2sp: return 2;
    case ProtocolKind::DD3sp: return 3;
    case ProtocolKind::mDD2sp: return 2;
  }
  return 0;
}

Protocol Protocol::free_evolution() { return Protocol{}; }

Protocol Protocol::dd(ProtocolKind kind, Family family, double tau_s, double cycle_s, std::vector<int> targets,
                      Modification mod, const PhaseTables& tables) {
  Protocol p;
  p.kind = kind;
  p.family = family;
  p.tau_s = tau_s;
  p.targets = std::move(targets);
  p.modification = mod;
  const int n = static_cast<int>(tables.phases_deg(family).size());
  p.tp_s = pulse_width_for_cycle(n, kind == ProtocolKind::mDD2sp ? 1 : 0, tau_s, cycle_s);
  p.validate();
  return p;
}

void Protocol::validate() const {
  if (kind == ProtocolKind::FreeEv) {
    if (!targets.empty()) throw std::invalid_argument("free evolution takes no target qubits");
    return;
  }
  if (static_cast<int>(targets.size()) != target_count(kind))
    throw std::invalid_argument(kind_name(kind) + " needs " + std::to_string(target_count(kind)) +
                                " target qubit(s), got " + std::to_string(targets.size()));
  if (!(tau_s > 0.0)) throw std::invalid_argument("interpulse delay must be > 0");
  if (!(tp_s >= 0.0)) throw std::invalid_argument("pulse width must be >= 0");
}

std::string Protocol::sequence_label() const {
  if (kind == ProtocolKind::FreeEv) return "free";
  return (kind == ProtocolKind::mDD2sp ? "m" : "") + family_name(family);
}

DDCycle Protocol::cycle(const PhaseTables& tables) const {
  if (kind == ProtocolKind::FreeEv) throw std::invalid_argument("free evolution has no DD cycle");
  DDCycle c = generate(family, tau_s, tp_s, targets, tables);
  if (kind == ProtocolKind::mDD2sp) c = modify(c, modification);
  return c;
}

DecayCurve run_decay(const StateSpec& state, const Protocol& protocol, const SpinSystem& sys,
                     const std::vector<double>& times_s, int threads) {
  const Vec8 psi = run_circuit(state.prep);
  const Mat8 rho0 = psi * psi.adjoint();
  const cd ref = rho0(state.row, state.col);
  if (std::abs(ref) < 1e-12)
    throw std::invalid_argument("state " + state.id + " has no initial amplitude on its tracked element");

  DecayCurve curve;
  curve.state = state.id;
  curve.protocol = kind_name(protocol.kind);
  curve.sequence = protocol.sequence_label();
  curve.kind = "amplitude";
  curve.row = state.row;
  curve.col = state.col;
  curve.times_s = times_s;
  const auto states = evolve(rho0, protocol, sys, times_s, threads);
  for (std::size_t k = 0; k < states.size(); ++k) {
    check_state(states[k], state.id + "/" + curve.sequence + " at t=" + std::to_string(times_s[k]));
    const cd v = states[k](state.row, state.col);
    curve.values.push_back(std::abs(v) / std::abs(ref));
    curve.inphase.push_back((v / ref).real());
  }
  return curve;
}

DecayCurve run_decay(const std::string& state_id, const Protocol& protocol, const SpinSystem& sys,
                     const std::vector<double>& times_s, int threads) {
  return run_decay(StateCatalog::builtin().get(state_id), protocol, sys, times_s, threads);
}

Percent percent_at(const DecayCurve& curve, double t_s) {
  const auto& t = curve.times_s;
  if (t.empty() || t.size() != curve.values.size()) throw std::invalid_argument("curve has no samples");
  std::vector<std::size_t> idx(t.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
  for (std::size_t k : idx)
    if (std::abs(t[k] - t_s) <= 1e-9) return {100.0 * curve.values[k], false};
  if (t_s < t[idx.front()] || t_s > t[idx.back()])
    throw std::out_of_range("time " + std::to_string(t_s) + " s is outside the curve's sample range");
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    const double t0 = t[idx[k]], t1 = t[idx[k + 1]];
    if (t_s >= t0 && t_s <= t1) {
      const double w = (t_s - t0) / (t1 - t0);
      return {100.0 * ((1.0 - w) * curve.values[idx[k]] + w * curve.values[idx[k + 1]]), true};
    }
  }
  throw std::out_of_range("time outside curve");
}

std::vector<double> commensurate_grid(double unit_s, double t_end_s, int points) {
  if (!(unit_s > 0.0) || !(t_end_s >= 0.0) || points < 2)
    throw std::invalid_argument("grid needs unit > 0, t_end >= 0 and at least two points");
  const double m = std::round(t_end_s / unit_s);
  if (std::abs(m * unit_s - t_end_s) > 1e-9) {
    std::ostringstream msg;
    msg << std::setprecision(12) << "end time " << t_end_s << " s is not a multiple of the repeat unit " << unit_s
        << " s; nearest valid end times are " << std::floor(t_end_s / unit_s) * unit_s << " s and "
        << (std::floor(t_end_s / unit_s) + 1) * unit_s << " s";
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> out;
  for (int k = 0; k < points; ++k) out.push_back(std::round(k * m / (points - 1)) * unit_s);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> uniform_grid(double t_end_s, int points) {
  if (!(t_end_s >= 0.0) || points < 2) throw std::invalid_argument("grid needs t_end >= 0 and at least two points");
  std::vector<double> out;
  for (int k = 0; k < points; ++k) out.push_back(t_end_s * k / (points - 1));
  return out;
}

std::vector<double> protocol_grid(const Protocol& p, double t_end_s, int points) {
  if (p.kind == ProtocolKind::FreeEv) return uniform_grid(t_end_s, points);
  return commensurate_grid(p.cycle().unit_duration_s(), t_end_s, points);
}

const ReferenceTable& ReferenceTable::builtin() {
  static const ReferenceTable t = parse(data::embedded("reference_tables.json"), "reference_tables.json");
  return t;
}

ReferenceTable ReferenceTable::parse(std::string_view json_text, const std::string& source) {
  ReferenceTable t;
  try {
    auto doc = nlohmann::json::parse(json_text);
    t.time_s_ = doc.at("time_s").get<double>();
    for (const auto& tab : doc.at("tables")) {
      const auto states = tab.at("states").get<std::vector<std::string>>();
      const std::size_t first = t.cells_.size();
      for (const auto& s : states) t.cells_.push_back({s, {}});
      for (const auto& [seq, row] : tab.at("rows").items()) {
        const auto vals = row.get<std::vector<double>>();
        if (vals.size() != states.size())
          throw ConfigError(source + ": row " + seq + " has " + std::to_string(vals.size()) + " values for " +
                            std::to_string(states.size()) + " states");
        for (std::size_t k = 0; k < vals.size(); ++k) t.cells_[first + k].second.push_back({seq, vals[k]});
      }
    }
    if (doc.contains("notes")) t.notes_ = doc.at("notes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return t;
}

std::vector<std::string> ReferenceTable::states() const {
  std::vector<std::string> out;
  for (const auto& c : cells_) out.push_back(c.first);
  return out;
}

std::vector<std::string> ReferenceTable::sequences(const std::string& state) const {
  for (const auto& c : cells_) {
    if (c.first != state) continue;
    std::vector<std::string> out;
    for (const auto& s : c.second) out.push_back(s.first);
    return out;
  }
  throw std::invalid_argument("reference table has no state '" + state + "'");
}

bool ReferenceTable::has(const std::string& state, const std::string& sequence) const {
  for (const auto& c : cells_)
    if (c.first == state)
      for (const auto& s : c.second)
        if (s.first == sequence) return true;
  return false;
}

double ReferenceTable::percent(const std::string& state, const std::string& sequence) const {
  for (const auto& c : cells_)
    if (c.first == state)
      for (const auto& s : c.second)
        if (s.first == sequence) return s.second;
  throw std::invalid_argument("reference table has no cell (" + state + ", " + sequence + ")");
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::NotApplicable: return "n/a";
  }
  return "?";
}

ProtocolKind reference_protocol(const StateSpec& state) {
  switch (std::abs(state.order())) {
    case 1: return ProtocolKind::DD1sp;
    case 3: return ProtocolKind::DD3sp;
    default: return ProtocolKind::mDD2sp;
  }
}

OrderingFact compare_protocols(const std::vector<CellResult>& results, const std::string& state,
                               ProtocolKind winner, ProtocolKind loser, double margin_pp) {
  OrderingFact f;
  f.state = state;
  f.winner = winner;
  f.loser = loser;
  f.margin_pp = margin_pp;
  f.claim = kind_name(winner) + " beats " + kind_name(loser);
  if (winner == loser) return f;
  auto best = [&](ProtocolKind k, std::string& seq, double& pct) {
    bool found = false;
    for (const auto& r : results) {
      if (r.state != state || r.kind != k) continue;
      if (!found || r.percent > pct) {
        pct = r.percent;
        seq = r.sequence;
      }
      found = true;
    }
    if (!found) throw std::invalid_argument("no result for (" + state + ", " + kind_name(k) + ")");
  };
  best(winner, f.winner_sequence, f.winner_percent);
  best(loser, f.loser_sequence, f.loser_percent);
  f.verdict = f.winner_percent - f.loser_percent >= margin_pp ? Verdict::Holds : Verdict::Fails;
  return f;
}

OrderingReport compare_to_reference(const std::vector<CellResult>& results, const ReferenceTable& table,
                                    double margin_pp, const StateCatalog& catalog) {
  OrderingReport rep;
  rep.margin_pp = margin_pp;

  std::vector<std::string> missing;
  auto has = [&](const std::string& state, ProtocolKind k, const std::string& seq) {
    return std::any_of(results.begin(), results.end(), [&](const CellResult& r) {
      return r.state == state && r.kind == k && (seq.empty() || r.sequence == seq);
    });
  };
  for (const auto& state : table.states()) {
    const StateSpec& spec = catalog.get(state);
    const ProtocolKind target = reference_protocol(spec);
    for (const auto& seq : table.sequences(state)) {
      const bool free = seq == "free";
      const ProtocolKind k = free ? ProtocolKind::FreeEv : target;
      if (!has(state, k, seq)) missing.push_back("(" + state + ", " + kind_name(k) + ", " + seq + ")");
    }
    if (target != ProtocolKind::DD3sp && !has(state, ProtocolKind::DD3sp, ""))
      missing.push_back("(" + state + ", DD3sp)");
  }
  if (!missing.empty()) {
    std::string msg = "results do not cover the reference grid; missing";
    for (const auto& m : missing) msg += " " + m;
    throw std::invalid_argument(msg);
  }

  for (const auto& state : table.states()) {
    const StateSpec& spec = catalog.get(state);
    const int order = std::abs(spec.order());
    const ProtocolKind target = reference_protocol(spec);
    auto add = [&](char fact, ProtocolKind w, ProtocolKind l) {
      OrderingFact f = compare_protocols(results, state, w, l, margin_pp);
      f.fact = fact;
      rep.facts.push_back(f);
    };
    if (order >= 1) {
      add('a', target, ProtocolKind::FreeEv);
      for (ProtocolKind k : {ProtocolKind::DD1sp, ProtocolKind::DD2sp, ProtocolKind::DD3sp, ProtocolKind::mDD2sp})
        if (k != target && has(state, k, "")) add('a', k, ProtocolKind::FreeEv);
    }
    if (order == 0 || order == 2) add('b', ProtocolKind::mDD2sp, ProtocolKind::DD3sp);
    if (order == 1) add('c', ProtocolKind::DD1sp, ProtocolKind::DD3sp);
    if (order == 3) {
      OrderingFact f = compare_protocols(results, state, ProtocolKind::DD3sp, ProtocolKind::FreeEv, margin_pp);
      f.fact = 'd';
      f.claim = "DD3sp keeps at least the margin of order-3 coherence";
      f.loser_sequence.clear();
      f.loser_percent = 0.0;
      f.verdict = f.winner_percent >= margin_pp ? Verdict::Holds : Verdict::Fails;
      rep.facts.push_back(f);
    }
  }
  return rep;
}

bool OrderingReport::all_hold() const {
  return std::all_of(facts.begin(), facts.end(), [](const OrderingFact& f) { return f.verdict != Verdict::Fails; });
}

std::string OrderingReport::format() const {
  std::ostringstream o;
  for (const auto& f : facts) {
    o << std::left << std::setw(7) << f.state << " (" << f.fact << ") " << std::setw(52) << f.claim << " "
      << verdict_name(f.verdict) << ": " << f.winner_sequence << " " << format_pct(f.winner_percent) << "%";
    if (!f.loser_sequence.empty()) o << " vs " << f.loser_sequence << " " << format_pct(f.loser_percent) << "%";
    o << "\n";
  }
  return o.str();
}

nlohmann::json OrderingReport::to_json() const {
  nlohmann::json facts_json = nlohmann::json::array();
  for (const auto& f : facts) {
    nlohmann::json j = {{"state", f.state},
                        {"fact", std::string(1, f.fact)},
                        {"claim", f.claim},
                        {"verdict", verdict_name(f.verdict)},
                        {"winner", kind_name(f.winner)},
                        {"winner_sequence", f.winner_sequence},
                        {"winner_percent", f.winner_percent}};
    if (!f.loser_sequence.empty()) {
      j["loser"] = kind_name(f.loser);
      j["loser_sequence"] = f.loser_sequence;
      j["loser_percent"] = f.loser_percent;
    }
    facts_json.push_back(j);
  }
  return {{"margin_pp", margin_pp}, {"all_hold", all_hold()}, {"facts", facts_json}};
}

DensityMatrix star_initial_state(const SpinSystem& sys, bool nmr_prep) {
  if (!nmr_prep) return prepare("star");
  SpinSystem nominal = sys;
  nominal.disorder = DisorderModel{};
  const Program prog = star_circuit_nmr(nominal);
  return apply_sequence(DensityMatrix(), nominal, prog.events, prog.duration_s);
}

StarCurves star_protection(const SpinSystem& sys, const std::vector<int>& pair, double tau_s,
                           const std::vector<double>& times_s, const StarOptions& opts) {
  const bool ok = pair.size() == 2 && ((pair[0] == 0 && pair[1] == 2) || (pair[0] == 1 && pair[1] == 2));
  if (!ok) throw std::invalid_argument("star protection pair must be qubits (1,3) or (2,3)");
  const DensityMatrix rho0 = star_initial_state(sys, opts.nmr_prep);

  const Protocol dd = Protocol::dd(ProtocolKind::mDD2sp, opts.family, tau_s, opts.cycle_s, pair);
  const std::string pair_label = std::to_string(pair[0] + 1) + std::to_string(pair[1] + 1);

  auto make = [&](const Protocol& p) {
    DecayCurve c;
    c.state = "star";
    c.protocol = kind_name(p.kind);
    c.sequence = p.sequence_label();
    c.kind = "concurrence";
    c.subsystem = pair;
    c.times_s = times_s;
    const auto states = evolve(Mat8(rho0.matrix()), p, sys, times_s, opts.threads);
    for (std::size_t k = 0; k < states.size(); ++k) {
      check_state(states[k], "star/" + c.sequence + " pair " + pair_label);
      DensityMatrix rho{Mat(states[k])};
      if (opts.tomography) {
        TomographyOptions t = opts.tomo;
        t.seed = opts.tomo.seed + k;
        rho = tomography(rho, t);
      }
      c.values.push_back(concurrence(partial_trace(rho, pair)));
    }
    return c;
  };
  return StarCurves{pair, make(Protocol::free_evolution()), make(dd)};
}

std::vector<int> protocol_targets(ProtocolKind kind, const StateSpec& state) {
  const auto q = state.coherence_qubits();
  switch (kind) {
    case ProtocolKind::FreeEv: return {};
    case ProtocolKind::DD3sp: return {0, 1, 2};
    case ProtocolKind::DD1sp:
      if (q.size() != 1) throw std::invalid_argument("DD1sp needs a state with a single coherence-bearing qubit");
      return q;
    case ProtocolKind::DD2sp:
    case ProtocolKind::mDD2sp:
      if (q.size() != 2) throw std::invalid_argument(kind_name(kind) + " needs a state whose tracked element differs in two qubits");
      return q;
  }
  return {};
}

void write_csv(std::ostream& out, const std::vector<DecayCurve>& curves, bool header) {
  if (header) out << "state,protocol,sequence,time_s,value,kind\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < c.times_s.size(); ++k)
      out << c.state << "," << c.protocol << "," << c.sequence << "," << num(c.times_s[k]) << ","
          << num(c.values[k]) << "," << c.kind << "\n";
    for (std::size_t k = 0; k < c.inphase.size(); ++k)
      out << c.state << "," << c.protocol << "," << c.sequence << "," << num(c.times_s[k]) << ","
          << num(c.inphase[k]) << ",inphase\n";
  }
}

}  // namespace mqc
