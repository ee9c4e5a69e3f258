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

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mqc/circuits.hpp"
#include "mqc/ddseq.hpp"
#include "mqc/errors.hpp"
#include "mqc/qmat.hpp"
#include "mqc/run_config.hpp"
#include "mqc/runner.hpp"

namespace mqc::cli {

namespace {

using json = nlohmann::json;
constexpr int kExitInvariant = 3;
constexpr const char* kVersion = "0.1.0";

RunConfig resolve(const ConfigArgs& a) {
  std::vector<std::string> overrides = a.overrides;
  if (!a.out_dir.empty()) overrides.push_back("output.directory=" + a.out_dir);
  return load_run_config(a.config_path, overrides);
}

std::filesystem::path output_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

std::vector<int> zero_based(const std::vector<int>& one_based) {
  std::vector<int> out;
  for (int q : one_based) {
    if (q < 1 || q > 3) throw std::invalid_argument("qubit numbers run from 1 to 3");
    out.push_back(q - 1);
  }
  return out;
}

std::string fmt(double v, int prec) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(prec) << v;
  return o.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json summary_header(const RunConfig& cfg) {
  return {{"tool", "mqc"},
          {"version", kVersion},
          {"fidelity_convention", kFidelityConvention},
          {"config", cfg.document.to_json()}};
}

}  // namespace

int cmd_orders(int qubits, bool as_json, std::ostream& out) {
  const Eigen::MatrixXi t = coherence_order_table(qubits);
  if (as_json) {
    json rows = json::array();
    for (int i = 0; i < t.rows(); ++i) {
      json r = json::array();
      for (int j = 0; j < t.cols(); ++j) r.push_back(t(i, j));
      rows.push_back(r);
    }
    out << json{{"qubits", qubits}, {"orders", rows}}.dump(2) << "\n";
    return 0;
  }
  auto ket = [&](int b) {
    std::string s;
    for (int q = qubits - 1; q >= 0; --q) s += ((b >> q) & 1) ? '1' : '0';
    return s;
  };
  out << std::setw(qubits + 3) << "";
  for (int j = 0; j < t.cols(); ++j) out << std::setw(qubits + 4) << ("<" + ket(j) + "|");
  out << "\n";
  for (int i = 0; i < t.rows(); ++i) {
    out << std::setw(qubits + 3) << ("|" + ket(i) + ">");
    for (int j = 0; j < t.cols(); ++j) {
      const int v = t(i, j);
      out << std::setw(qubits + 4) << (v > 0 ? "+" + std::to_string(v) : std::to_string(v));
    }
    out << "\n";
  }
  return 0;
}

int cmd_sequences(const SequenceArgs& a, std::ostream& out) {
  if (a.robustness) {
    RobustnessSetup setup;
    const auto results = robustness_check(PhaseTables::builtin(), setup);
    bool ok = true;
    out << "flip error " << setup.flip_error * 100 << "%, tau " << setup.tau_s * 1e3 << " ms, " << setup.cycles
        << " cycles; survival vs CPMG with the same pulse count\n";
    for (const auto& r : results) {
      out << std::left << std::setw(7) << family_name(r.family) << std::right << fmt(r.survival, 6) << "  CPMG "
          << fmt(r.cpmg_survival, 6) << "  " << (r.passes() ? "pass" : "FAIL") << "\n";
      ok = ok && r.passes();
    }
    return ok ? 0 : kExitInvariant;
  }

  DDCycle cycle;
  if (!a.import_path.empty()) {
    std::ifstream f(a.import_path);
    if (!f) throw ConfigError("cannot open '" + a.import_path + "'");
    json j;
    try {
      f >> j;
    } catch (const json::exception& e) {
      throw ConfigError(a.import_path + ": " + e.what());
    }
    cycle = cycle_from_json(j);
  } else {
    const Family family = parse_family(a.family);
    const double tau = a.tau_ms * 1e-3;
    const int n = static_cast<int>(PhaseTables::builtin().phases_deg(family).size());
    double tp = a.tp_us >= 0.0 ? a.tp_us * 1e-6 : 0.0;
    if (a.cycle_s > 0.0) tp = pulse_width_for_cycle(n, a.modify ? 1 : 0, tau, a.cycle_s);
    cycle = generate(family, tau, tp, zero_based(a.targets));
    if (a.modify) {
      Modification m;
      m.slot = a.slot;
      m.passive = a.passive > 0 ? a.passive - 1 : -1;
      m.doubled = a.doubled > 0 ? a.doubled - 1 : -1;
      cycle = modify(cycle, m);
    }
  }
  const json j = to_json(cycle);
  if (!a.export_path.empty()) write_text(a.export_path, j.dump(2) + "\n");
  if (a.json)
    out << j.dump(2) << "\n";
  else
    out << format_table(cycle);
  return 0;
}

int cmd_prepare(const PrepareArgs& a, std::ostream& out) {
  const StateSpec& s = StateCatalog::builtin().get(a.state);
  const DensityMatrix rho = prepare(a.state);
  rho.check();
  if (a.json) {
    out << to_json(rho).dump(2) << "\n";
    return 0;
  }
  out << s.id << " = " << s.ket << "\n";
  out << "tracked element (" << s.row << "," << s.col << "), rho_" << s.row + 1 << s.col + 1
      << " in 1-based labels, coherence order " << s.order() << "\n";
  out << "circuit:";
  for (const auto& g : s.prep) out << "  " << describe(g);
  out << "\n";
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const cd v = rho(i, j);
      std::string cell = std::abs(v) < 1e-12 ? "0" : fmt(v.real(), 4);
      if (std::abs(v.imag()) >= 1e-12) cell += (v.imag() < 0 ? "-" : "+") + fmt(std::abs(v.imag()), 4) + "i";
      out << std::setw(16) << cell;
    }
    out << "\n";
  }
  out << "fidelity to the catalog ket: " << fmt(fidelity(rho, DensityMatrix::pure(s.expected)), 12) << "\n";
  if (a.nmr) {
    if (a.state != "star") throw std::invalid_argument("--nmr is only defined for the star state");
    const RunConfig cfg = load_run_config("", {});
    SpinSystem ideal = cfg.system;
    ideal.noise = NoiseModel{};
    ideal.disorder = DisorderModel{};
    ideal.pulse_error = PulseErrorModel{};
    const Program prog = star_circuit_nmr(ideal);
    out << "pulse program (" << prog.events.size() << " pulses, " << fmt(prog.duration_s * 1e3, 4) << " ms):\n";
    for (const auto& e : prog.events) {
      out << "  t=" << std::setw(9) << fmt(e.start_s * 1e3, 4) << " ms  flip " << std::setw(6)
          << fmt(e.flip_rad * 180.0 / M_PI, 1) << "  phase " << std::setw(6)
          << fmt(e.phases_rad.front() * 180.0 / M_PI, 1) << "  qubits";
      for (int q : e.targets) out << " " << q + 1;
      out << "\n";
    }
    const DensityMatrix made = apply_sequence(DensityMatrix(), ideal, prog.events, prog.duration_s);
    out << "noiseless program fidelity to the star state: " << fmt(fidelity(made, rho), 12) << "\n";
  }
  return 0;
}

int cmd_decay(const ConfigArgs& a, bool strict, std::ostream& out) {
  const RunConfig cfg = resolve(a);
  const auto t0 = std::chrono::steady_clock::now();
  const GridResult grid = run_grid(cfg);
  const double runtime = seconds_since(t0);
  const auto dir = output_dir(cfg);

  std::ostringstream csv;
  write_csv(csv, grid.curves);
  write_text(dir / "decay.csv", csv.str());

  const ReferenceTable& table = ReferenceTable::builtin();
  json summary = summary_header(cfg);
  summary["comparison_time_s"] = cfg.t_end_s;
  json cells = json::array();
  for (const auto& c : grid.cells) {
    json j = {{"state", c.state}, {"protocol", kind_name(c.kind)}, {"sequence", c.sequence}, {"percent", c.percent}};
    if (table.has(c.state, c.sequence) &&
        (c.sequence == "free" || reference_protocol(StateCatalog::builtin().get(c.state)) == c.kind))
      j["reference_percent"] = table.percent(c.state, c.sequence);
    cells.push_back(j);
  }
  summary["cells"] = cells;

  bool facts_hold = true;
  const bool covers = std::abs(cfg.t_end_s - table.time_s()) < 1e-9 && [&] {
    for (const auto& s : table.states())
      if (std::find(cfg.states.begin(), cfg.states.end(), s) == cfg.states.end()) return false;
    return true;
  }();
  if (covers) {
    try {
      const OrderingReport rep = compare_to_reference(grid.cells, table, cfg.margin_pp);
      summary["ordering"] = rep.to_json();
      facts_hold = rep.all_hold();
      out << "ordering facts at t = " << cfg.t_end_s << " s (margin " << cfg.margin_pp << " pp):\n" << rep.format();
    } catch (const std::invalid_argument& e) {
      summary["ordering"] = {{"skipped", e.what()}};
      out << "ordering report skipped: " << e.what() << "\n";
    }
  } else {
    summary["ordering"] = {{"skipped", "the run does not cover every reference state at the reference time"}};
    if (!cfg.states.empty()) out << "ordering report skipped: the run does not cover the reference grid\n";
  }
  summary["reference_notes"] = table.notes();
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  out << grid.curves.size() << " curves over " << cfg.states.size() << " states in " << fmt(runtime, 2)
      << " s; wrote " << (dir / "decay.csv").string() << " and " << (dir / "summary.json").string() << "\n";
  return strict && !facts_hold ? kExitInvariant : 0;
}

int cmd_protect(const ProtectArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve(a.config);
  const StateSpec& s = StateCatalog::builtin().get(a.state);
  const ProtocolKind kind = parse_kind(a.protocol);
  Protocol p = Protocol::free_evolution();
  if (kind != ProtocolKind::FreeEv) {
    const Family f = parse_family(a.family);
    const std::string label = (kind == ProtocolKind::mDD2sp ? "m" : "") + family_name(f);
    double tau = a.tau_ms * 1e-3;
    if (tau <= 0.0) {
      auto st = cfg.tau_s.find(s.id);
      if (st == cfg.tau_s.end() || !st->second.count(label))
        throw ConfigError("no interpulse delay for " + s.id + " " + label + "; pass --tau-ms");
      tau = st->second.at(label);
    }
    double cycle = a.cycle_s;
    if (cycle <= 0.0) {
      auto it = cfg.cycle_s.find(label);
      if (it == cfg.cycle_s.end()) throw ConfigError("no cycle duration for " + label + "; pass --cycle-s");
      cycle = it->second;
    }
    Modification mod;
    mod.slot = cfg.modification_slot;
    p = Protocol::dd(kind, f, tau, cycle, protocol_targets(kind, s), mod);
  }
  const DecayCurve c = run_decay(s, p, cfg.system, protocol_grid(p, cfg.t_end_s, cfg.points), cfg.threads);
  write_csv(out, {c});
  return 0;
}

int cmd_star(const ConfigArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve(a);
  StarOptions opts;
  opts.family = cfg.star.family;
  opts.cycle_s = cfg.star.cycle_s;
  opts.nmr_prep = cfg.star.nmr_prep;
  opts.tomography = cfg.star.tomography;
  opts.tomo.noise_sigma = cfg.tomo.noise_sigma;
  opts.tomo.seed = cfg.tomo.seed;
  opts.threads = cfg.threads;

  std::vector<DecayCurve> curves;
  json pairs = json::array();
  for (auto [pair, tau] : {std::pair{std::vector<int>{0, 2}, cfg.star.tau13_s},
                           std::pair{std::vector<int>{1, 2}, cfg.star.tau23_s}}) {
    const Protocol dd = Protocol::dd(ProtocolKind::mDD2sp, opts.family, tau, opts.cycle_s, pair);
    const auto times = protocol_grid(dd, cfg.star.t_end_s, cfg.star.points);
    const StarCurves sc = star_protection(cfg.system, pair, tau, times, opts);
    const std::string name = std::string("rho_") + (pair[0] == 0 ? "AC" : "BC");
    out << name << " (qubits " << pair[0] + 1 << "," << pair[1] + 1 << "), " << sc.protected_curve.sequence
        << " tau " << fmt(tau * 1e3, 3) << " ms\n";
    out << "  t_s       free     protected\n";
    json rows = json::array();
    for (std::size_t k = 0; k < times.size(); ++k) {
      out << "  " << std::left << std::setw(8) << fmt(times[k], 3) << std::right << std::setw(8)
          << fmt(sc.free.values[k], 4) << std::setw(12) << fmt(sc.protected_curve.values[k], 4) << "\n";
      rows.push_back({{"t_s", times[k]}, {"free", sc.free.values[k]}, {"protected", sc.protected_curve.values[k]}});
    }
    pairs.push_back({{"subsystem", name}, {"qubits", {pair[0] + 1, pair[1] + 1}}, {"tau_s", tau}, {"samples", rows}});
    curves.push_back(sc.free);
    curves.push_back(sc.protected_curve);
    curves[curves.size() - 2].state = curves.back().state = "star_" + std::string(pair[0] == 0 ? "AC" : "BC");
  }
  const auto dir = output_dir(cfg);
  std::ostringstream csv;
  write_csv(csv, curves);
  write_text(dir / "star.csv", csv.str());
  json summary = summary_header(cfg);
  summary["pairs"] = pairs;
  write_text(dir / "star_summary.json", summary.dump(2) + "\n");
  out << "wrote " << (dir / "star.csv").string() << " and " << (dir / "star_summary.json").string() << "\n";
  return 0;
}

int cmd_tomo(const ConfigArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve(a);
  json rows = json::array();
  bool ok = true;
  out << "state    noiseless     sigma=" << cfg.tomo.noise_sigma << "\n";
  for (const auto& id : cfg.tomo.states) {
    const DensityMatrix rho = prepare(id);
    const double f0 = fidelity(tomography(rho), rho);
    const double f1 = fidelity(tomography(rho, {cfg.tomo.noise_sigma, cfg.tomo.seed}), rho);
    ok = ok && f0 >= 0.999;
    out << std::left << std::setw(9) << id << std::right << fmt(f0, 6) << "     " << fmt(f1, 6) << "\n";
    rows.push_back({{"state", id}, {"fidelity_noiseless", f0}, {"fidelity_noisy", f1}});
  }
  const auto dir = output_dir(cfg);
  json summary = summary_header(cfg);
  summary["settings"] = tomography_settings();
  summary["states"] = rows;
  write_text(dir / "tomo.json", summary.dump(2) + "\n");
  out << "wrote " << (dir / "tomo.json").string() << "\n";
  if (!ok) {
    std::cerr << "mqc: noiseless reconstruction fidelity below 0.999\n";
    return kExitInvariant;
  }
  return 0;
}

int cmd_config_reference(std::ostream& out) {
  out << config_reference();
  return 0;
}

}  // namespace mqc::cli
