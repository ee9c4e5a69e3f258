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

#include "mqc/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mqc/data.hpp"
#include "mqc/errors.hpp"
#include "mqc/parallel.hpp"

namespace mqc {

namespace {

constexpr const char* kTauPrefix = "tau_ms.";

bool is_sequence_label(const std::string& s) {
  std::string base = s.size() > 1 && s[0] == 'm' ? s.substr(1) : s;
  try {
    parse_family(base);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

const KeySpec* find_spec(const std::string& section, const std::string& key) {
  for (const auto& k : config_schema()) {
    const bool section_match =
        k.section == section || (k.section == "tau_ms.<state>" && section.rfind(kTauPrefix, 0) == 0);
    if (!section_match) continue;
    if (k.key == key || (k.key == "<sequence>" && is_sequence_label(key))) return &k;
  }
  return nullptr;
}

ConfigError located(const ConfigEntry& e, const std::string& msg) { return ConfigError(e.origin + ": " + msg); }

}  // namespace

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema{
      {"system", "offsets_hz", "3 reals", "rotating-frame offsets nu_1 nu_2 nu_3 (Hz)"},
      {"system", "couplings_hz", "3 reals", "scalar couplings J12 J13 J23 (Hz)"},
      {"system", "gamma_s", "3 reals", "independent dephasing rate per qubit (1/s)"},
      {"system", "gamma_corr_s", "real", "collective dephasing rate (1/s), scales with coherence order squared"},
      {"pulse", "flip_error", "real", "relative flip-angle error epsilon (> -1)"},
      {"pulse", "phase_error_deg", "real", "phase error added to every pulse (deg)"},
      {"pulse", "duration_s", "real", "width of a pi pulse in programs without a cycle-derived width (s)"},
      {"pulse", "internal_hamiltonian", "bool", "evolve under offsets and couplings during pulses"},
      {"disorder", "offset_sigma_hz", "3 reals", "quasi-static offset spread per qubit (Hz)"},
      {"disorder", "common_sigma_hz", "real", "quasi-static offset spread common to all qubits (Hz)"},
      {"disorder", "flip_sigma", "real", "quasi-static spread of the flip error"},
      {"disorder", "shots", "integer", "stratified Gaussian shots; 0 disables the disorder average"},
      {"disorder", "seed", "integer", "seed of the shot sampler"},
      {"run", "states", "words", "states to run (catalog ids); empty runs nothing"},
      {"run", "families", "words", "DD families: XY4 XY8 XY16 UR12 KDD20"},
      {"run", "t_end_s", "real", "last sample time and comparison time (s)"},
      {"run", "points", "integer", "samples per curve"},
      {"run", "margin_pp", "real", "percentage-point margin for an ordering fact to hold"},
      {"run", "threads", "integer", "worker threads; 0 uses every core"},
      {"run", "modification_slot", "integer", "slot of the m-variant modification; -1 is n/2"},
      {"cycle_s", "<sequence>", "real", "cycle duration per sequence label, e.g. XY8 or mXY8 (s)"},
      {"tau_ms.<state>", "<sequence>", "real", "interpulse delay per state and sequence label (ms)"},
      {"star", "family", "word", "DD family of the star-state protection cycle"},
      {"star", "cycle_s", "real", "cycle duration of the protection cycle (s)"},
      {"star", "tau13_ms", "real", "interpulse delay when protecting qubits 1 and 3 (ms)"},
      {"star", "tau23_ms", "real", "interpulse delay when protecting qubits 2 and 3 (ms)"},
      {"star", "prep", "word", "ideal (gate-level) or nmr (pulse program)"},
      {"star", "tomography", "bool", "reconstruct each sampled state by tomography first"},
      {"star", "t_end_s", "real", "last sample time (s)"},
      {"star", "points", "integer", "samples per curve"},
      {"tomo", "states", "words", "states reconstructed by the tomo command"},
      {"tomo", "noise_sigma", "real", "additive Gaussian noise on each expectation value"},
      {"tomo", "seed", "integer", "seed of the readout noise"},
      {"output", "directory", "path", "directory receiving CSV and JSON artifacts"},
  };
  return schema;
}

ConfigDocument default_config_document() {
  return ConfigDocument::parse(data::embedded("default.conf"), "default.conf");
}

RunConfig resolve_run_config(const ConfigDocument& doc, const StateCatalog& catalog) {
  for (const auto& [section, entries] : doc.sections()) {
    if (section.rfind(kTauPrefix, 0) == 0) {
      const std::string state = section.substr(std::string(kTauPrefix).size());
      if (!catalog.has(state)) {
        const std::string where = entries.empty() ? std::string("[") + section + "]" : entries.begin()->second.origin;
        throw ConfigError(where + ": section [" + section + "] names unknown state '" + state + "'");
      }
    }
    for (const auto& [key, entry] : entries)
      if (!find_spec(section, key)) throw located(entry, "unknown key '" + key + "' in section [" + section + "]");
  }

  RunConfig c;
  c.document = doc;
  auto at = [&](const char* s, const char* k) -> const ConfigEntry& { return doc.at(s, k); };
  auto name = [](const char* s, const char* k) { return std::string(s) + "." + k; };
  auto real3 = [&](const char* s, const char* k) {
    auto v = to_reals(at(s, k), name(s, k), 3);
    return std::array<double, 3>{v[0], v[1], v[2]};
  };
  auto real = [&](const char* s, const char* k) { return to_real(at(s, k), name(s, k)); };
  auto integer = [&](const char* s, const char* k) { return to_integer(at(s, k), name(s, k)); };

  SpinSystem& sys = c.system;
  sys.offsets_hz = real3("system", "offsets_hz");
  sys.couplings_hz = real3("system", "couplings_hz");
  sys.noise.gamma_s = real3("system", "gamma_s");
  sys.noise.gamma_corr_s = real("system", "gamma_corr_s");
  sys.pulse_error.flip_error = real("pulse", "flip_error");
  sys.pulse_error.phase_error_rad = real("pulse", "phase_error_deg") * std::numbers::pi / 180.0;
  sys.pulse_error.duration_s = real("pulse", "duration_s");
  sys.pulse_error.internal_hamiltonian = to_bool(at("pulse", "internal_hamiltonian"), "pulse.internal_hamiltonian");
  sys.disorder.offset_sigma_hz = real3("disorder", "offset_sigma_hz");
  sys.disorder.common_sigma_hz = real("disorder", "common_sigma_hz");
  sys.disorder.flip_sigma = real("disorder", "flip_sigma");
  const long shots = integer("disorder", "shots");
  if (shots < 0 || shots > 100000) throw located(at("disorder", "shots"), "shots must be in 0..100000");
  sys.disorder.shots = static_cast<int>(shots);
  const long seed = integer("disorder", "seed");
  if (seed < 0) throw located(at("disorder", "seed"), "seed must be >= 0");
  sys.disorder.seed = static_cast<std::uint64_t>(seed);
  try {
    sys.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid spin system: ") + e.what());
  }

  for (const auto& s : to_words(at("run", "states"))) {
    if (!catalog.has(s)) throw located(at("run", "states"), "unknown state '" + s + "'");
    if (s == "star") throw located(at("run", "states"), "the star state is run by the star command");
    c.states.push_back(s);
  }
  for (const auto& f : to_words(at("run", "families"))) {
    try {
      c.families.push_back(parse_family(f));
    } catch (const std::invalid_argument& e) {
      throw located(at("run", "families"), e.what());
    }
  }
  c.t_end_s = real("run", "t_end_s");
  if (!(c.t_end_s > 0.0)) throw located(at("run", "t_end_s"), "t_end_s must be > 0");
  c.points = static_cast<int>(integer("run", "points"));
  if (c.points < 2) throw located(at("run", "points"), "points must be >= 2");
  c.margin_pp = real("run", "margin_pp");
  c.threads = static_cast<int>(integer("run", "threads"));
  if (c.threads < 0) throw located(at("run", "threads"), "threads must be >= 0");
  c.modification_slot = static_cast<int>(integer("run", "modification_slot"));

  if (auto it = doc.sections().find("cycle_s"); it != doc.sections().end())
    for (const auto& [label, entry] : it->second) {
      c.cycle_s[label] = to_real(entry, "cycle_s." + label);
      if (!(c.cycle_s[label] > 0.0)) throw located(entry, "cycle duration must be > 0");
    }
  for (const auto& [section, entries] : doc.sections()) {
    if (section.rfind(kTauPrefix, 0) != 0) continue;
    const std::string state = section.substr(std::string(kTauPrefix).size());
    for (const auto& [label, entry] : entries) {
      const double ms = to_real(entry, section + "." + label);
      if (!(ms > 0.0)) throw located(entry, "interpulse delay must be > 0");
      c.tau_s[state][label] = ms * 1e-3;
    }
  }

  try {
    c.star.family = parse_family(at("star", "family").value);
  } catch (const std::invalid_argument& e) {
    throw located(at("star", "family"), e.what());
  }
  c.star.cycle_s = real("star", "cycle_s");
  c.star.tau13_s = real("star", "tau13_ms") * 1e-3;
  c.star.tau23_s = real("star", "tau23_ms") * 1e-3;
  const std::string prep = at("star", "prep").value;
  if (prep != "ideal" && prep != "nmr") throw located(at("star", "prep"), "prep must be 'ideal' or 'nmr'");
  c.star.nmr_prep = prep == "nmr";
  c.star.tomography = to_bool(at("star", "tomography"), "star.tomography");
  c.star.t_end_s = real("star", "t_end_s");
  c.star.points = static_cast<int>(integer("star", "points"));
  if (c.star.points < 2) throw located(at("star", "points"), "points must be >= 2");

  for (const auto& s : to_words(at("tomo", "states"))) {
    if (!catalog.has(s)) throw located(at("tomo", "states"), "unknown state '" + s + "'");
    c.tomo.states.push_back(s);
  }
  c.tomo.noise_sigma = real("tomo", "noise_sigma");
  if (!(c.tomo.noise_sigma >= 0.0)) throw located(at("tomo", "noise_sigma"), "noise_sigma must be >= 0");
  const long tseed = integer("tomo", "seed");
  if (tseed < 0) throw located(at("tomo", "seed"), "seed must be >= 0");
  c.tomo.seed = static_cast<std::uint64_t>(tseed);

  c.output_dir = at("output", "directory").value;
  if (c.output_dir.empty()) throw located(at("output", "directory"), "output directory must not be empty");
  return c;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides,
                          const StateCatalog& catalog) {
  ConfigDocument doc = default_config_document();
  if (!path.empty()) {
    ConfigDocument user = ConfigDocument::load(path);
    for (const auto& [section, entries] : user.sections())
      for (const auto& [key, entry] : entries)
        if (!find_spec(section, key))
          throw located(entry, "unknown key '" + key + "' in section [" + section + "]");
    doc.merge(user);
  }
  for (const auto& o : overrides) {
    doc.apply_override(o);
  }
  return resolve_run_config(doc, catalog);
}

std::string config_reference() {
  const ConfigDocument defaults = default_config_document();
  std::ostringstream o;
  o << "# Configuration reference. Values shown are the built-in defaults.\n"
    << "# Override with a config file (--config) or --set section.key=value.\n";
  std::string current;
  for (const auto& k : config_schema()) {
    if (k.section != current) {
      current = k.section;
      o << "\n[" << current << "]\n";
    }
    o << "# " << k.doc << " [" << k.type << "]\n";
    if (k.section == "tau_ms.<state>" || k.section == "cycle_s") {
      for (const auto& [section, entries] : defaults.sections()) {
        const bool match = k.section == "cycle_s" ? section == "cycle_s" : section.rfind(kTauPrefix, 0) == 0;
        if (!match) continue;
        std::string line;
        for (const auto& [key, entry] : entries) line += " " + key + "=" + entry.value;
        o << "#   default [" << section << "]:" << line << "\n";
      }
      continue;
    }
    const ConfigEntry* e = defaults.find(k.section, k.key);
    o << k.key << " = " << (e ? e->value : "") << "\n";
  }
  return o.str();
}

std::vector<Protocol> protocols_for(const RunConfig& cfg, const StateSpec& state) {
  std::vector<Protocol> out{Protocol::free_evolution()};
  const int order = std::abs(state.order());
  std::vector<ProtocolKind> kinds;
  if (order == 1) kinds = {ProtocolKind::DD1sp, ProtocolKind::DD3sp};
  else if (order == 3) kinds = {ProtocolKind::DD3sp};
  else kinds = {ProtocolKind::DD2sp, ProtocolKind::mDD2sp, ProtocolKind::DD3sp};

  for (ProtocolKind k : kinds) {
    const std::vector<int> targets = protocol_targets(k, state);
    for (Family f : cfg.families) {
      const std::string label = (k == ProtocolKind::mDD2sp ? "m" : "") + family_name(f);
      auto st = cfg.tau_s.find(state.id);
      if (st == cfg.tau_s.end() || !st->second.count(label))
        throw ConfigError("missing interpulse delay [tau_ms." + state.id + "] " + label);
      auto cy = cfg.cycle_s.find(label);
      if (cy == cfg.cycle_s.end()) throw ConfigError("missing cycle duration [cycle_s] " + label);
      Modification mod;
      mod.slot = cfg.modification_slot;
      try {
        out.push_back(Protocol::dd(k, f, st->second.at(label), cy->second, targets, mod));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(state.id + " " + label + ": " + e.what());
      }
    }
  }
  return out;
}

GridResult run_grid(const RunConfig& cfg, const StateCatalog& catalog) {
  struct Job {
    const StateSpec* state;
    Protocol protocol;
    std::vector<double> times;
  };
  std::vector<Job> jobs;
  for (const auto& id : cfg.states) {
    const StateSpec& s = catalog.get(id);
    for (auto& p : protocols_for(cfg, s)) {
      std::vector<double> times;
      try {
        times = protocol_grid(p, cfg.t_end_s, cfg.points);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(id + " " + p.sequence_label() + ": " + e.what());
      }
      jobs.push_back(Job{&s, std::move(p), std::move(times)});
    }
  }
  GridResult r;
  r.curves.resize(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), cfg.threads, [&](int k) {
    r.curves[k] = run_decay(*jobs[k].state, jobs[k].protocol, cfg.system, jobs[k].times, 1);
  });
  for (std::size_t k = 0; k < jobs.size(); ++k)
    r.cells.push_back(CellResult{jobs[k].state->id, jobs[k].protocol.kind, jobs[k].protocol.sequence_label(),
                                 percent_at(r.curves[k], cfg.t_end_s).value});
  return r;
}

}  // namespace mqc
