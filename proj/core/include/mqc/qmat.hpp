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

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace mqc {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix<cd, 2, 2>;
using Mat8 = Eigen::Matrix<cd, 8, 8>;
using Vec8 = Eigen::Matrix<cd, 8, 1>;

inline constexpr int kMaxQubits = 3;

// Density matrix over the computational basis of 1 to 3 qubits. Basis index
// b is read as a bitstring with qubit 0 as the most significant bit, so for
// three qubits |q0 q1 q2> has index 4*q0 + 2*q1 + q2.
//
// Construction only checks the shape. Use validated() or check() to enforce
// the physical invariants; evolution code keeps round-off drift unchecked.
class DensityMatrix {
 public:
  DensityMatrix();  // |0..0><0..0| on three qubits
  explicit DensityMatrix(Mat m);

  static DensityMatrix validated(Mat m);
  static DensityMatrix pure(const Vec& psi);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  int qubits() const;
  const Mat& matrix() const { return m_; }
  cd operator()(int i, int j) const { return m_(i, j); }

  double trace_deviation() const;
  double hermiticity_deviation() const;
  double min_eigenvalue() const;
  double purity() const;

  // Throws InvariantError if Hermiticity or trace deviate by more than
  // tol, or an eigenvalue is below -eig_floor.
  void check(double tol = 1e-12, double eig_floor = 1e-10) const;

 private:
  Mat m_;
};

// popcount(j) - popcount(i) for basis indices of an n-qubit register.
int coherence_order(int i, int j, int n);
Eigen::MatrixXi coherence_order_table(int n);

// Splits rho into parts that each carry a single coherence order. Orders
// whose part is identically zero are omitted.
std::map<int, Mat> decompose_by_order(const DensityMatrix& rho);

// |rho(i,j)| for an off-diagonal element.
double coherence_amplitude(const DensityMatrix& rho, int i, int j);

// Traces out every qubit not listed in keep (0-based). The kept qubits
// appear in the result in the order given.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Wootters concurrence of a two-qubit state.
double concurrence(const DensityMatrix& rho);

// Squared Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
inline constexpr const char* kFidelityConvention = "squared Uhlmann: (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2";

// Principal square root of a Hermitian positive semidefinite matrix;
// negative eigenvalues from round-off are clipped to zero.
Mat psd_sqrt(const Mat& m);

// {dim, entries: [[re, im], ...]} in row-major order.
nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

}  // namespace mqc
