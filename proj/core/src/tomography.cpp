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

#include <algorithm>
#include <array>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mqc/circuits.hpp"
#include "mqc/errors.hpp"

namespace mqc {

namespace {

constexpr int kUnknowns = 63;  // traceless Pauli coefficients

// Pauli string p in base 4, digit for qubit 0 most significant: I, X, Y, Z.
Mat8 pauli_string(int p) {
  const std::array<Mat2, 4> base{Mat2::Identity(), gates::pauli_x(), gates::pauli_y(), gates::pauli_z()};
  Mat8 m = Mat8::Identity();
  for (int q = 0; q < 3; ++q) {
    const int digit = (p / (q == 0 ? 16 : q == 1 ? 4 : 1)) % 4;
    if (digit != 0) m = gates::single(q, base[digit]) * m;
  }
  return m;
}

// Line observables: sigma_x and sigma_y of one spin with the other two spins
// resolved into computational states, plus all eight populations.
std::vector<Mat8> observables() {
  std::vector<Mat8> obs;
  for (int q = 0; q < 3; ++q) {
    for (int env = 0; env < 4; ++env) {
      Mat8 proj = Mat8::Identity();
      int k = 0;
      for (int r = 0; r < 3; ++r) {
        if (r == q) continue;
        const int bit = (env >> (1 - k)) & 1;
        Mat2 p = Mat2::Zero();
        p(bit, bit) = 1.0;
        proj = gates::single(r, p) * proj;
        ++k;
      }
      obs.push_back(gates::single(q, gates::pauli_x()) * proj);
      obs.push_back(gates::single(q, gates::pauli_y()) * proj);
    }
  }
  for (int b = 0; b < 8; ++b) {
    Mat8 p = Mat8::Zero();
    p(b, b) = 1.0;
    obs.push_back(p);
  }
  return obs;
}

struct Design {
  std::vector<Mat8> measured;  // R^dag O R for every setting and observable
  Eigen::MatrixXd a;           // measurement = offset + a * coefficients
  Eigen::VectorXd offset;
  Eigen::MatrixXd pinv;
};

const Design& design() {
  static const Design d = [] {
    Design d;
    const auto obs = observables();
    for (const auto& word : tomography_settings()) {
      const Mat8 r = readout_unitary(word);
      for (const auto& o : obs) d.measured.push_back(r.adjoint() * o * r);
    }
    const int m = static_cast<int>(d.measured.size());
    std::vector<Mat8> paulis;
    for (int p = 1; p <= kUnknowns; ++p) paulis.push_back(pauli_string(p));
    d.a.resize(m, kUnknowns);
    d.offset.resize(m);
    for (int i = 0; i < m; ++i) {
      d.offset(i) = d.measured[i].trace().real() / 8.0;
      for (int p = 0; p < kUnknowns; ++p) d.a(i, p) = (d.measured[i] * paulis[p]).trace().real() / 8.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cutoff = 1e-10 * s(0);
    int rank = 0;
    for (int k = 0; k < s.size(); ++k)
      if (s(k) > cutoff) ++rank;
    if (rank < kUnknowns)
      throw InvariantError("tomography settings reach only " + std::to_string(rank) + " of " +
                           std::to_string(kUnknowns) + " Pauli coefficients");
    d.pinv = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
    return d;
  }();
  return d;
}

}  // namespace

const std::vector<std::string>& tomography_settings() {
  static const std::vector<std::string> s{"III", "IIY", "IYY", "YII", "XYX", "XXY", "XXX"};
  return s;
}

DensityMatrix tomography(const DensityMatrix& rho_true, const TomographyOptions& opts) {
  if (rho_true.dim() != 8) throw std::invalid_argument("tomography acts on three-qubit states");
  if (!(opts.noise_sigma >= 0.0)) throw std::invalid_argument("tomography noise sigma must be >= 0");
  const Design& d = design();
  const Mat8 rho = rho_true.matrix();
  Eigen::VectorXd y(d.measured.size());
  for (std::size_t i = 0; i < d.measured.size(); ++i) y(i) = (d.measured[i] * rho).trace().real();
  if (opts.noise_sigma > 0.0) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> noise(0.0, opts.noise_sigma);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += noise(rng);
  }
  const Eigen::VectorXd c = d.pinv * (y - d.offset);
  Mat8 est = Mat8::Identity();
  for (int p = 0; p < kUnknowns; ++p) est += c(p) * pauli_string(p + 1);
  est /= 8.0;

  // Closest unit-trace PSD matrix in Frobenius norm: eigenvalues projected
  // onto the probability simplex. Plain clip-and-rescale keeps the positive
  // noise eigenvalues and costs several percent of fidelity at sigma = 0.01.
  Eigen::SelfAdjointEigenSolver<Mat8> es(0.5 * (est + est.adjoint()));
  const Eigen::Matrix<double, 8, 1> lam = es.eigenvalues();
  std::array<double, 8> sorted{};
  for (int k = 0; k < 8; ++k) sorted[k] = lam(k);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (int k = 0; k < 8; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / (k + 1);
    if (sorted[k] - candidate > 0.0) shift = candidate;
  }
  Eigen::Matrix<double, 8, 1> w = (lam.array() - shift).cwiseMax(0.0);
  if (w.sum() <= 0.0) throw InvariantError("tomography reconstruction has no positive weight");
  w /= w.sum();
  Mat8 out = es.eigenvectors() * w.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(Mat(0.5 * (out + out.adjoint())));
}

}  // namespace mqc
