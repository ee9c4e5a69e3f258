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

#include <vector>

namespace mqc {

// A timed rotation applied simultaneously to one or more qubits (0-based).
// phases_rad holds one rotation axis angle per target, measured from x
// towards y. flip_rad is the nominal rotation angle before pulse errors.
struct PulseEvent {
  double start_s = 0.0;
  double duration_s = 0.0;
  std::vector<int> targets;
  std::vector<double> phases_rad;
  double flip_rad = 0.0;

  double end_s() const { return start_s + duration_s; }
  double center_s() const { return start_s + 0.5 * duration_s; }
  bool acts_on(int q) const;
  double phase_of(int q) const;  // throws if q is not a target
};

// Events plus the total time they span, free evolution filling the gaps.
struct Program {
  std::vector<PulseEvent> events;
  double duration_s = 0.0;
};

// Throws std::invalid_argument if any event is malformed (no targets,
// phase count mismatch, negative duration, repeated target).
void validate_event(const PulseEvent& e);

}  // namespace mqc
