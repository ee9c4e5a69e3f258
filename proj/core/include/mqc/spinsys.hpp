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

#include <array>
#include <cstdint>
#include <vector>

#include "mqc/pulse.hpp"
#include "mqc/qmat.hpp"

namespace mqc {

// Markovian pure dephasing. gamma_s is the independent rate of each qubit;
// gamma_corr_s is a collective-field rate whose effect scales with the
// square of the coherence order.
struct NoiseModel {
  std::array<double, 3> gamma_s{0.0, 0.0, 0.0};
  double gamma_corr_s = 0.0;
};

// flip_error scales every rotation angle by (1 + flip_error).
// duration_s is the width used for pulses whose width is not fixed by a
// schedule (the DD generators derive their own width from the cycle time).
struct PulseErrorModel {
  double flip_error = 0.0;
  double phase_error_rad = 0.0;
  double duration_s = 0.0;
  bool internal_hamiltonian = false;
};

// Quasi-static inhomogeneity averaged over seeded, stratified Gaussian
// shots. Each shot shifts qubit q's offset by offset_sigma_hz[q]*z_q plus a
// common shift common_sigma_hz*z_c, and adds flip_sigma*z_f to the flip
// error. Disabled when shots == 0.
struct DisorderModel {
  std::array<double, 3> offset_sigma_hz{0.0, 0.0, 0.0};
  double common_sigma_hz = 0.0;
  double flip_sigma = 0.0;
  int shots = 0;
  std::uint64_t seed = 1;

  bool enabled() const { return shots > 0; }
};

struct SpinSystem {
  std::array<double, 3> offsets_hz{500.0, -300.0, 150.0};
  std::array<double, 3> couplings_hz{48.0, 161.0, -192.0};  // J12, J13, J23
  NoiseModel noise;
  PulseErrorModel pulse_error;
  DisorderModel disorder;

  double coupling(int q, int r) const;  // 0-based, q != r
  void validate() const;                // throws std::invalid_argument
};

// Secular energy of basis state b in Hz.
double energy(int b, const SpinSystem& sys);
std::array<double, 8> energies(const SpinSystem& sys);

// Element-wise dephasing rate R_ab (1/s).
double dephasing_rate(int a, int b, const NoiseModel& noise);

// Exact free evolution over t seconds for the system's nominal parameters.
DensityMatrix free_propagate(const DensityMatrix& rho, const SpinSystem& sys, double t);

// Free evolution averaged in closed form over the Gaussian offset disorder
// of sys.disorder (identical to free_propagate when disorder is off).
DensityMatrix free_propagate_averaged(const DensityMatrix& rho, const SpinSystem& sys, double t);

// Propagator of a single event (pulse errors from sys.pulse_error applied).
// With duration 0 the rotation is instantaneous; otherwise the rf field of
// amplitude flip/(2 pi duration) Hz, plus the secular Hamiltonian when
// internal_hamiltonian is set, is exponentiated over the duration.
Mat8 pulse_propagator(const PulseEvent& pulse, const SpinSystem& sys);

DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat8& u);

// Free evolution interleaved with the events. Pulses of finite width use a
// symmetric split of dephasing around the pulse unitary.
DensityMatrix apply_sequence(const DensityMatrix& rho, const SpinSystem& sys,
                             const std::vector<PulseEvent>& events, double duration_s);

// Throws std::invalid_argument for unsorted events, overlaps on a qubit or
// events past the end.
void validate_schedule(const std::vector<PulseEvent>& events, double duration_s);

// A program compiled against one fixed spin system, reusable across
// repetitions.
class CompiledProgram {
 public:
  CompiledProgram(const SpinSystem& sys, const Program& program);

  void apply_in_place(Mat8& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;
  // Coherent part only (dephasing ignored).
  Mat8 unitary() const;
  double duration_s() const { return duration_s_; }

 private:
  enum class Kind { Free, Pulse, SplitPulse };
  struct Op {
    Kind kind;
    Mat8 factor;  // element-wise factor (Free) or half-step dephasing (SplitPulse)
    Mat8 u;       // pulse unitary
    Vec8 phases;  // coherent diagonal propagator of a Free segment
  };
  std::vector<Op> ops_;
  double duration_s_ = 0.0;
};

// One nominal system per disorder shot, with the shot's offsets and flip
// error folded in and disorder cleared. With disorder off this is {sys}.
std::vector<SpinSystem> disorder_realizations(const SpinSystem& sys);

}  // namespace mqc
