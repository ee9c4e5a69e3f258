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

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mqc/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

void add_config_options(CLI::App* cmd, mqc::cli::ConfigArgs& a) {
  cmd->add_option("-c,--config", a.config_path, "run configuration file (defaults are built in)");
  cmd->add_option("--set", a.overrides, "override a key: section.key=value (repeatable)");
  cmd->add_option("-o,--out", a.out_dir, "output directory (overrides output.directory)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mqc::cli;
  CLI::App app{"mqc: multiple-quantum coherence protection with robust dynamical decoupling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mqc 0.1.0");

  int order_qubits = 3;
  bool order_json = false;
  auto* orders = app.add_subcommand("orders", "print the coherence-order matrix");
  orders->add_option("-n,--qubits", order_qubits, "qubit count (1..3)")->check(CLI::Range(1, 3));
  orders->add_flag("--json", order_json, "print as JSON");

  SequenceArgs seq;
  auto* sequences = app.add_subcommand("sequences", "print or export a DD cycle or its m-variant");
  sequences->add_option("-f,--family", seq.family, "XY4, XY8, XY16, UR12 or KDD20");
  sequences->add_option("--tau-ms", seq.tau_ms, "interpulse delay (ms)");
  auto* tp_opt = sequences->add_option("--tp-us", seq.tp_us, "pulse width (us)");
  sequences->add_option("--cycle-s", seq.cycle_s, "derive the pulse width from this cycle duration (s)")
      ->excludes(tp_opt);
  sequences->add_option("-t,--targets", seq.targets, "target qubits, 1-based")->delimiter(',');
  sequences->add_flag("-m,--modify", seq.modify, "apply the m-modification (two targets)");
  sequences->add_option("--slot", seq.slot, "modified slot (default n/2)");
  sequences->add_option("--passive", seq.passive, "idle qubit of the modified slot (1-based)");
  sequences->add_option("--doubled", seq.doubled, "qubit receiving two pulses (1-based)");
  sequences->add_flag("--json", seq.json, "print JSON instead of a table");
  sequences->add_option("--export", seq.export_path, "write the cycle JSON to a file");
  sequences->add_option("--import", seq.import_path, "read a cycle JSON file and print it");
  sequences->add_flag("--robustness", seq.robustness, "run the flip-error robustness check of every table");

  PrepareArgs prep;
  auto* prepare = app.add_subcommand("prepare", "print a state's preparation circuit and density matrix");
  prepare->add_option("-s,--state", prep.state, "state id")->required();
  prepare->add_flag("--json", prep.json, "print the density matrix as JSON");
  prepare->add_flag("--nmr", prep.nmr, "star only: print the pulse-level program and its fidelity");

  ConfigArgs decay_cfg;
  bool strict = false;
  auto* decay = app.add_subcommand("decay", "run the state/protocol grid and the ordering report");
  add_config_options(decay, decay_cfg);
  decay->add_flag("--strict", strict, "exit 3 when an ordering fact fails");

  ProtectArgs prot;
  auto* protect = app.add_subcommand("protect", "run one state under one protocol and print its curve");
  add_config_options(protect, prot.config);
  protect->add_option("-s,--state", prot.state, "state id")->required();
  protect->add_option("-p,--protocol", prot.protocol, "FreeEv, DD1sp, DD2sp, DD3sp or mDD2sp")->required();
  protect->add_option("-f,--family", prot.family, "DD family");
  protect->add_option("--tau-ms", prot.tau_ms, "interpulse delay (ms); default from config");
  protect->add_option("--cycle-s", prot.cycle_s, "cycle duration (s); default from config");

  ConfigArgs star_cfg;
  auto* star = app.add_subcommand("star", "star-state entanglement protection curves");
  add_config_options(star, star_cfg);

  ConfigArgs tomo_cfg;
  auto* tomo = app.add_subcommand("tomo", "tomographic reconstruction of prepared states");
  add_config_options(tomo, tomo_cfg);

  app.add_subcommand("config-reference", "print every configuration key with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (orders->parsed()) return cmd_orders(order_qubits, order_json, std::cout);
    if (sequences->parsed()) return cmd_sequences(seq, std::cout);
    if (prepare->parsed()) return cmd_prepare(prep, std::cout);
    if (decay->parsed()) return cmd_decay(decay_cfg, strict, std::cout);
    if (protect->parsed()) return cmd_protect(prot, std::cout);
    if (star->parsed()) return cmd_star(star_cfg, std::cout);
    if (tomo->parsed()) return cmd_tomo(tomo_cfg, std::cout);
    return cmd_config_reference(std::cout);
  } catch (const mqc::InvariantError& e) {
    std::cerr << "mqc: invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const mqc::ConfigError& e) {
    std::cerr << "mqc: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mqc: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "mqc: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "mqc: " << e.what() << "\n";
    return 1;
  }
}
