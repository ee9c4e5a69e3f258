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
#include <string>
#include <string_view>
#include <vector>

#include "mqc/pulse.hpp"
#include "mqc/qmat.hpp"
#include "mqc/spinsys.hpp"

namespace mqc {

namespace gates {
Mat2 hadamard();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
// exp(-i theta/2 (cos(phi) X + sin(phi) Y))
Mat2 rotation(double theta, double phi);
Mat2 ry(double theta);
// Embeds a one-qubit operator on qubit q (0-based) of three.
Mat8 single(int q, const Mat2& op);
Mat8 cnot(int control, int target);
// Applies op to target when control is |1>.
Mat8 controlled(int control, int target, const Mat2& op);
}  // namespace gates

// Qubits are 0-based here; catalog files use 1-based numbering.
struct Gate {
  std::string name;  // H, X, Y, Z, RY, CNOT, CRY
  std::vector<int> qubits;
  double angle_rad = 0.0;

  Mat8 matrix() const;
};

std::string describe(const Gate& g);

struct StateSpec {
  std::string id;
  std::string ket;  // display form
  int row = 0;      // tracked element, basis indices
  int col = 0;
  std::vector<Gate> prep;
  Vec8 expected;  // normalized target ket

  int order() const;
  // Qubits whose bits differ between row and col (0-based).
  std::vector<int> coherence_qubits() const;
};

class StateCatalog {
 public:
  static const StateCatalog& builtin();
  static StateCatalog parse(std::string_view json_text, const std::string& source = "<text>");

  const StateSpec& get(const std::string& id) const;  // throws std::invalid_argument
  bool has(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::vector<StateSpec> states_;
};

Vec8 run_circuit(const std::vector<Gate>& gates);
DensityMatrix prepare(const std::string& id, const StateCatalog& catalog = StateCatalog::builtin());

// Pulse-level star-state preparation: hard rotations interleaved with
// coupling windows of 1/(2|J|). Program text lines:
//   rot <q> <angle_deg> <phase_deg>
//   zz <q> <r>
// A zz window refocuses offsets and couplings to the third spin and leaves
// exp(-i pi/4 Z_q Z_r); for negative J a Z_q Z_r correction is prepended.
Program star_circuit_nmr(const SpinSystem& sys);
Program star_circuit_nmr(const SpinSystem& sys, std::string_view program_text);
std::string_view star_program_text();

// Applies pi/2 pulses about x or y at every non-I letter of a three-letter
// word such as "IYI" (letter k addresses qubit k+1).
Mat8 readout_unitary(std::string_view word);
DensityMatrix readout(const DensityMatrix& rho, std::string_view word);

// Sum of |m(i,j)| over elements of coherence order +1 or -1.
double single_quantum_amplitude(const Mat& m);
// Single-quantum amplitude produced by the readout from the (i,j) and (j,i)
// elements of rho alone.
double readout_signal(const DensityMatrix& rho, std::string_view word, int i, int j);

struct TomographyOptions {
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
};

const std::vector<std::string>& tomography_settings();
DensityMatrix tomography(const DensityMatrix& rho_true, const TomographyOptions& opts = {});

}  // namespace mqc
