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

#include "mqc/ddseq.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mqc/data.hpp"
#include "mqc/errors.hpp"

namespace mqc {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kCommensurateTol = 1e-9;

void check_targets(const std::vector<int>& targets) {
  if (targets.empty()) throw std::invalid_argument("DD cycle needs at least one target qubit");
  for (std::size_t a = 0; a < targets.size(); ++a) {
    if (targets[a] < 0 || targets[a] > 2) throw std::out_of_range("DD target must be a qubit index 0..2");
    for (std::size_t b = a + 1; b < targets.size(); ++b)
      if (targets[a] == targets[b]) throw std::invalid_argument("DD targets repeat a qubit");
  }
}

// Lays the slots out on the time grid.
void schedule(DDCycle& c) {
  c.events.clear();
  double shift = 0.0;
  const double pitch = c.tau_s + c.tp_s;
  for (std::size_t i = 0; i < c.slots.size(); ++i) {
    const Slot& s = c.slots[i];
    const double start = static_cast<double>(i) * pitch + c.tau_s / 2.0 + shift;
    if (s.modified()) {
      for (int k = 0; k < 2; ++k) {
        PulseEvent e;
        e.start_s = start + k * c.tp_s;
        e.duration_s = c.tp_s;
        e.targets = {s.doubled};
        e.phases_rad = {s.phase_deg * kDeg};
        e.flip_rad = std::numbers::pi;
        c.events.push_back(e);
      }
      shift += c.tp_s;
    } else {
      PulseEvent e;
      e.start_s = start;
      e.duration_s = c.tp_s;
      e.targets = c.targets;
      e.phases_rad.assign(c.targets.size(), s.phase_deg * kDeg);
      e.flip_rad = std::numbers::pi;
      c.events.push_back(e);
    }
  }
  c.duration_s = static_cast<double>(c.slots.size()) * pitch + shift;
}

DDCycle make_cycle(std::string name, std::string family, const std::vector<double>& phases,
                   double tau_s, double tp_s, const std::vector<int>& targets) {
  if (!(tau_s > 0.0) || !std::isfinite(tau_s)) throw std::invalid_argument("interpulse delay tau must be > 0");
  if (!(tp_s >= 0.0) || !std::isfinite(tp_s)) throw std::invalid_argument("pulse width must be >= 0");
  check_targets(targets);
  DDCycle c;
  c.name = std::move(name);
  c.family = std::move(family);
  c.tau_s = tau_s;
  c.tp_s = tp_s;
  c.targets = targets;
  for (double p : phases) c.slots.push_back(Slot{p, -1, -1});
  schedule(c);
  return c;
}

std::string trim(std::string s) {
  auto ws = [](unsigned char ch) { return std::isspace(ch) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::XY4: return "XY4";
    case Family::XY8: return "XY8";
    case Family::XY16: return "XY16";
    case Family::UR12: return "UR12";
    case Family::KDD20: return "KDD20";
  }
  throw std::invalid_argument("unknown DD family");
}

Family parse_family(std::string_view name) {
  for (Family f : all_families())
    if (family_name(f) == name) return f;
  throw std::invalid_argument("unknown DD family '" + std::string(name) +
                              "' (expected XY4, XY8, XY16, UR12 or KDD20)");
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> f{Family::XY4, Family::XY8, Family::XY16, Family::UR12, Family::KDD20};
  return f;
}

const PhaseTables& PhaseTables::builtin() {
  static const PhaseTables t = parse(data::embedded("phase_tables.txt"), "phase_tables.txt");
  return t;
}

PhaseTables PhaseTables::load(const std::string& path) { return parse(data::read_file(path), path); }

PhaseTables PhaseTables::parse(std::string_view text, const std::string& source) {
  PhaseTables t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "version") {
      if (!(ls >> t.version_) || t.version_ < 1) fail("bad version");
    } else if (word == "family") {
      std::string fam, kw;
      ls >> fam >> kw;
      Family f;
      try {
        f = parse_family(fam);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      if (kw != "phases_deg") fail("expected 'phases_deg' after family name");
      std::vector<double> ph;
      std::string tok;
      while (ls >> tok) {
        try {
          std::size_t used = 0;
          ph.push_back(std::stod(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          fail("bad phase '" + tok + "'");
        }
      }
      if (ph.empty()) fail("family " + fam + " has no phases");
      if (t.phases_.count(f)) fail("family " + fam + " defined twice");
      t.phases_[f] = std::move(ph);
    } else if (word == "note") {
      std::string fam;
      ls >> fam;
      std::string rest;
      std::getline(ls, rest);
      try {
        t.notes_[parse_family(fam)] = trim(rest);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    } else {
      fail("unknown directive '" + word + "'");
    }
  }
  if (t.version_ < 1) throw ConfigError(source + ": missing 'version' line");
  return t;
}

const std::vector<double>& PhaseTables::phases_deg(Family f) const {
  auto it = phases_.find(f);
  if (it == phases_.end()) throw std::invalid_argument("phase table has no entry for " + family_name(f));
  return it->second;
}

std::string PhaseTables::note(Family f) const {
  auto it = notes_.find(f);
  return it == notes_.end() ? std::string() : it->second;
}

bool DDCycle::is_modified() const { return modified_slots() > 0; }

int DDCycle::modified_slots() const {
  return static_cast<int>(std::count_if(slots.begin(), slots.end(), [](const Slot& s) { return s.modified(); }));
}

int DDCycle::pulse_count(int qubit) const {
  int n = 0;
  for (const auto& e : events)
    if (e.acts_on(qubit)) ++n;
  return n;
}

DDCycle generate(Family family, double tau_s, double tp_s, const std::vector<int>& targets,
                 const PhaseTables& tables) {
  return make_cycle(family_name(family), family_name(family), tables.phases_deg(family), tau_s, tp_s, targets);
}

DDCycle generate_cpmg(int n, double tau_s, double tp_s, const std::vector<int>& targets) {
  if (n < 1) throw std::invalid_argument("CPMG train needs at least one pulse");
  return make_cycle("CPMG" + std::to_string(n), "CPMG", std::vector<double>(n, 0.0), tau_s, tp_s, targets);
}

DDCycle modify(const DDCycle& cycle, const Modification& mod) {
  if (cycle.targets.size() != 2)
    throw std::invalid_argument("modification needs a cycle on exactly two qubits");
  const int n = static_cast<int>(cycle.slots.size());
  const int k = mod.slot < 0 ? n / 2 : mod.slot;
  if (k >= n) throw std::out_of_range("modification slot " + std::to_string(k) + " out of range 0.." +
                                      std::to_string(n - 1));
  const int passive = mod.passive < 0 ? cycle.targets[0] : mod.passive;
  const int doubled = mod.doubled < 0 ? (passive == cycle.targets[0] ? cycle.targets[1] : cycle.targets[0])
                                      : mod.doubled;
  auto is_target = [&](int q) { return q == cycle.targets[0] || q == cycle.targets[1]; };
  if (!is_target(passive) || !is_target(doubled) || passive == doubled)
    throw std::invalid_argument("passive and doubled qubits must be the two distinct cycle targets");
  if (cycle.slots[k].modified())
    throw std::invalid_argument("slot " + std::to_string(k) + " is already modified");

  DDCycle out = cycle;
  out.slots[k].passive = passive;
  out.slots[k].doubled = doubled;
  if (!cycle.is_modified()) out.name = "m" + cycle.name;
  schedule(out);
  return out;
}

double pulse_width_for_cycle(int n_slots, int n_modified, double tau_s, double cycle_s) {
  if (n_slots < 1 || n_modified < 0) throw std::invalid_argument("bad slot counts");
  const double tp = (cycle_s - n_slots * tau_s) / (n_slots + n_modified);
  if (tp < -1e-15)
    throw std::invalid_argument("cycle time " + std::to_string(cycle_s) + " s is shorter than " +
                                std::to_string(n_slots) + " delays of " + std::to_string(tau_s) + " s");
  return std::max(tp, 0.0);
}

Program unit_program(const DDCycle& cycle) {
  Program p;
  for (int r = 0; r < cycle.repeat_unit(); ++r) {
    for (auto e : cycle.events) {
      e.start_s += r * cycle.duration_s;
      p.events.push_back(std::move(e));
    }
  }
  p.duration_s = cycle.unit_duration_s();
  return p;
}

int units_for(const DDCycle& cycle, double total_s) {
  if (!(total_s >= 0.0)) throw std::invalid_argument("total time must be >= 0");
  const double unit = cycle.unit_duration_s();
  if (!(unit > 0.0)) throw std::invalid_argument("cycle has zero duration");
  const double n = std::round(total_s / unit);
  if (std::abs(n * unit - total_s) > kCommensurateTol) {
    const double lo = std::floor(total_s / unit) * unit;
    std::ostringstream msg;
    msg << std::setprecision(12) << "time " << total_s << " s is not a whole number of " << cycle.name
        << " units (" << unit << " s); nearest valid times are " << lo << " s and " << lo + unit << " s";
    throw std::invalid_argument(msg.str());
  }
  return static_cast<int>(n);
}

Program repeat_to(const DDCycle& cycle, double total_s) {
  const int n = units_for(cycle, total_s);
  Program unit = unit_program(cycle);
  Program p;
  p.events.reserve(unit.events.size() * n);
  for (int r = 0; r < n; ++r) {
    for (auto e : unit.events) {
      e.start_s += r * unit.duration_s;
      p.events.push_back(std::move(e));
    }
  }
  p.duration_s = n * unit.duration_s;
  return p;
}

Mat8 cycle_propagator(const DDCycle& cycle, const SpinSystem& sys, bool ideal) {
  SpinSystem s = sys;
  s.noise = NoiseModel{};
  s.disorder = DisorderModel{};
  Program p = unit_program(cycle);
  if (ideal) {
    s.pulse_error = PulseErrorModel{};
    for (auto& e : p.events) {
      e.start_s = e.center_s();
      e.duration_s = 0.0;
    }
  }
  return CompiledProgram(s, p).unitary();
}

nlohmann::json to_json(const DDCycle& c) {
  using nlohmann::json;
  auto one_based = [](const std::vector<int>& v) {
    json a = json::array();
    for (int q : v) a.push_back(q + 1);
    return a;
  };
  json slots = json::array();
  for (const auto& s : c.slots) {
    json js = {{"phase_deg", s.phase_deg}};
    if (s.modified()) {
      js["passive"] = s.passive + 1;
      js["doubled"] = s.doubled + 1;
    }
    slots.push_back(js);
  }
  json events = json::array();
  for (const auto& e : c.events) {
    json ph = json::array();
    for (double p : e.phases_rad) ph.push_back(p / kDeg);
    events.push_back({{"t_s", e.start_s},
                      {"dur_s", e.duration_s},
                      {"targets", one_based(e.targets)},
                      {"phase_deg", ph},
                      {"flip_deg", e.flip_rad / kDeg}});
  }
  return {{"name", c.name},       {"family", c.family},     {"tau_s", c.tau_s},
          {"tp_s", c.tp_s},       {"duration_s", c.duration_s}, {"targets", one_based(c.targets)},
          {"repeat_unit", c.repeat_unit()}, {"slots", slots}, {"events", events}};
}

DDCycle cycle_from_json(const nlohmann::json& j) {
  try {
    DDCycle c;
    c.name = j.at("name").get<std::string>();
    c.family = j.at("family").get<std::string>();
    c.tau_s = j.at("tau_s").get<double>();
    c.tp_s = j.at("tp_s").get<double>();
    for (int q : j.at("targets").get<std::vector<int>>()) c.targets.push_back(q - 1);
    check_targets(c.targets);
    for (const auto& js : j.at("slots")) {
      Slot s{js.at("phase_deg").get<double>(), -1, -1};
      if (js.contains("doubled")) {
        s.passive = js.at("passive").get<int>() - 1;
        s.doubled = js.at("doubled").get<int>() - 1;
      }
      c.slots.push_back(s);
    }
    schedule(c);

    const auto& ev = j.at("events");
    if (ev.size() != c.events.size())
      throw ConfigError("cycle JSON: event list does not match the slot schedule");
    for (std::size_t k = 0; k < ev.size(); ++k) {
      const auto& e = c.events[k];
      std::vector<int> tg;
      for (int q : ev[k].at("targets").get<std::vector<int>>()) tg.push_back(q - 1);
      auto ph = ev[k].at("phase_deg").get<std::vector<double>>();
      bool same = tg == e.targets && std::abs(ev[k].at("t_s").get<double>() - e.start_s) < 1e-12 &&
                  std::abs(ev[k].at("dur_s").get<double>() - e.duration_s) < 1e-12 &&
                  std::abs(ev[k].at("flip_deg").get<double>() * kDeg - e.flip_rad) < 1e-12 &&
                  ph.size() == e.phases_rad.size();
      for (std::size_t a = 0; same && a < ph.size(); ++a) same = std::abs(ph[a] * kDeg - e.phases_rad[a]) < 1e-12;
      if (!same) throw ConfigError("cycle JSON: event " + std::to_string(k) + " does not match the slot schedule");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cycle JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("cycle JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(std::string("cycle JSON: ") + e.what());
  }
}

std::string format_table(const DDCycle& c) {
  std::ostringstream o;
  o << c.name << "  tau = " << c.tau_s * 1e3 << " ms  tp = " << c.tp_s * 1e6 << " us  cycle = "
    << c.duration_s * 1e3 << " ms";
  if (c.is_modified()) o << "  (repeat in pairs)";
  o << "\n";
  o << std::setw(4) << "#" << std::setw(12) << "start_ms" << std::setw(12) << "center_ms" << std::setw(10)
    << "dur_us" << std::setw(10) << "targets" << std::setw(10) << "phase" << "\n";
  o << std::fixed;
  for (std::size_t k = 0; k < c.events.size(); ++k) {
    const auto& e = c.events[k];
    std::string tg;
    for (int q : e.targets) tg += (tg.empty() ? "" : ",") + std::to_string(q + 1);
    o << std::setw(4) << k + 1 << std::setw(12) << std::setprecision(4) << e.start_s * 1e3 << std::setw(12)
      << e.center_s() * 1e3 << std::setw(10) << std::setprecision(2) << e.duration_s * 1e6 << std::setw(10) << tg
      << std::setw(10) << std::setprecision(1) << e.phases_rad.front() / kDeg << "\n";
  }
  for (int q : c.targets) o << "pulses on qubit " << q + 1 << ": " << c.pulse_count(q) << "\n";
  return o.str();
}

double robustness_survival(const DDCycle& cycle, const RobustnessSetup& setup) {
  if (setup.offsets_hz.empty() || setup.phases < 1 || setup.cycles < 0)
    throw std::invalid_argument("robustness setup needs offsets, phases >= 1 and cycles >= 0");
  double total = 0.0;
  for (double nu : setup.offsets_hz) {
    SpinSystem sys;
    sys.offsets_hz = {0.0, 0.0, 0.0};
    sys.offsets_hz[setup.qubit] = nu;
    sys.couplings_hz = {0.0, 0.0, 0.0};
    sys.pulse_error.flip_error = setup.flip_error;
    CompiledProgram prog(sys, unit_program(cycle));
    Mat8 u = Mat8::Identity();
    const Mat8 step = prog.unitary();
    for (int c = 0; c < setup.cycles; c += cycle.repeat_unit()) u = step * u;
    double worst = 1.0;
    for (int k = 0; k < setup.phases; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / setup.phases;
      Vec8 psi = Vec8::Zero();
      psi(0) = 1.0 / std::sqrt(2.0);
      psi(1 << (2 - setup.qubit)) = std::exp(cd(0.0, phi)) / std::sqrt(2.0);
      worst = std::min(worst, std::norm(psi.dot(u * psi)));
    }
    total += worst;
  }
  return total / static_cast<double>(setup.offsets_hz.size());
}

std::vector<RobustnessResult> robustness_check(const PhaseTables& tables, const RobustnessSetup& setup) {
  std::vector<RobustnessResult> out;
  for (Family f : all_families()) {
    if (!tables.has(f)) continue;
    DDCycle dd = generate(f, setup.tau_s, 0.0, {setup.qubit}, tables);
    DDCycle cpmg = generate_cpmg(static_cast<int>(dd.slots.size()), setup.tau_s, 0.0, {setup.qubit});
    out.push_back(RobustnessResult{f, robustness_survival(dd, setup), robustness_survival(cpmg, setup)});
  }
  return out;
}

}  // namespace mqc
