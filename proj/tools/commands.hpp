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
#include <vector>

namespace mqc::cli {

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;  // overrides output.directory when set
};

struct SequenceArgs {
  std::string family = "XY8";
  double tau_ms = 0.5;
  double tp_us = -1.0;
  double cycle_s = 0.0;
  std::vector<int> targets{3};
  bool modify = false;
  int slot = -1;
  int passive = 0;
  int doubled = 0;
  bool json = false;
  std::string export_path;
  std::string import_path;
  bool robustness = false;
};

struct PrepareArgs {
  std::string state;
  bool json = false;
  bool nmr = false;
};

struct ProtectArgs {
  ConfigArgs config;
  std::string state;
  std::string protocol;
  std::string family = "XY8";
  double tau_ms = 0.0;
  double cycle_s = 0.0;
};

int cmd_orders(int qubits, bool json, std::ostream& out);
int cmd_sequences(const SequenceArgs& a, std::ostream& out);
int cmd_prepare(const PrepareArgs& a, std::ostream& out);
int cmd_decay(const ConfigArgs& a, bool strict, std::ostream& out);
int cmd_protect(const ProtectArgs& a, std::ostream& out);
int cmd_star(const ConfigArgs& a, std::ostream& out);
int cmd_tomo(const ConfigArgs& a, std::ostream& out);
int cmd_config_reference(std::ostream& out);

}  // namespace mqc::cli
