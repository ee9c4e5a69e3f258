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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mqc/config.hpp"
#include "mqc/ddseq.hpp"
#include "mqc/runner.hpp"
#include "mqc/spinsys.hpp"

namespace mqc {

struct StarConfig {
  Family family = Family::XY8;
  double cycle_s = 0.005;
  double tau13_s = 0.563e-3;
  double tau23_s = 0.540e-3;
  bool nmr_prep = false;
  bool tomography = false;
  double t_end_s = 0.7;
  int points = 20;
};

struct TomoConfig {
  std::vector<std::string> states;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
};

struct RunConfig {
  SpinSystem system;
  std::vector<std::string> states;
  std::vector<Family> families;
  double t_end_s = 0.7;
  int points = 20;
  double margin_pp = 5.0;
  int threads = 0;
  int modification_slot = -1;
  std::map<std::string, double> cycle_s;                         // by sequence label
  std::map<std::string, std::map<std::string, double>> tau_s;   // state -> sequence label -> tau
  StarConfig star;
  TomoConfig tomo;
  std::string output_dir;
  ConfigDocument document;  // resolved key-value view, echoed into summaries
};

// Schema of every accepted key. Sections written as "tau_ms.<state>" and
// keys written as "<sequence>" are patterns.
struct KeySpec {
  std::string section;
  std::string key;
  std::string type;
  std::string doc;
};
const std::vector<KeySpec>& config_schema();

ConfigDocument default_config_document();

// Rejects unknown sections and keys (with their file:line) and converts.
RunConfig resolve_run_config(const ConfigDocument& doc, const StateCatalog& catalog = StateCatalog::builtin());

// Defaults, then the optional file, then --set overrides.
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides,
                          const StateCatalog& catalog = StateCatalog::builtin());

// Human-readable listing of all keys with their defaults.
std::string config_reference();

// Protocols run for a state: FreeEv plus DD1sp/DD3sp (order 1), DD2sp/mDD2sp/
// DD3sp (orders 0 and 2) or DD3sp (order 3), one per configured family.
std::vector<Protocol> protocols_for(const RunConfig& cfg, const StateSpec& state);

struct GridResult {
  std::vector<DecayCurve> curves;
  std::vector<CellResult> cells;  // percent at t_end
};

GridResult run_grid(const RunConfig& cfg, const StateCatalog& catalog = StateCatalog::builtin());

}  // namespace mqc
