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

#include "mqc/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mqc {

bool PulseEvent::acts_on(int q) const {
  return std::find(targets.begin(), targets.end(), q) != targets.end();
}

double PulseEvent::phase_of(int q) const {
  for (std::size_t k = 0; k < targets.size(); ++k)
    if (targets[k] == q) return phases_rad[k];
  throw std::out_of_range("pulse does not act on qubit " + std::to_string(q));
}

void validate_event(const PulseEvent& e) {
  if (e.targets.empty()) throw std::invalid_argument("pulse event has no targets");
  if (e.phases_rad.size() != e.targets.size())
    throw std::invalid_argument("pulse event needs one phase per target");
  if (!(e.duration_s >= 0.0) || !std::isfinite(e.duration_s))
    throw std::invalid_argument("pulse duration must be finite and >= 0");
  if (!std::isfinite(e.start_s) || !std::isfinite(e.flip_rad))
    throw std::invalid_argument("pulse start and flip angle must be finite");
  for (std::size_t a = 0; a < e.targets.size(); ++a) {
    if (e.targets[a] < 0 || e.targets[a] > 2)
      throw std::out_of_range("pulse target must be a qubit index 0..2");
    for (std::size_t b = a + 1; b < e.targets.size(); ++b)
      if (e.targets[a] == e.targets[b]) throw std::invalid_argument("pulse event repeats a target");
  }
}

}  // namespace mqc
