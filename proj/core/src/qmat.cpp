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

#include "mqc/qmat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mqc/errors.hpp"

namespace mqc {

namespace {

int qubits_for_dim(Eigen::Index dim) {
  switch (dim) {
    case 2: return 1;
    case 4: return 2;
    case 8: return 3;
    default:
      throw std::invalid_argument("density matrix dimension must be 2, 4 or 8, got " +
                                  std::to_string(dim));
  }
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
  Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

DensityMatrix::DensityMatrix() : m_(Mat::Zero(8, 8)) { m_(0, 0) = 1.0; }

DensityMatrix::DensityMatrix(Mat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("density matrix must be square");
  qubits_for_dim(m_.rows());
}

DensityMatrix DensityMatrix::validated(Mat m) {
  DensityMatrix rho(std::move(m));
  rho.check();
  return rho;
}

DensityMatrix DensityMatrix::pure(const Vec& psi) {
  double n = psi.norm();
  if (n == 0.0) throw std::invalid_argument("zero state vector");
  Vec v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  qubits_for_dim(dim);
  return DensityMatrix(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

int DensityMatrix::qubits() const { return qubits_for_dim(m_.rows()); }

double DensityMatrix::trace_deviation() const { return std::abs(m_.trace() - cd(1.0, 0.0)); }

double DensityMatrix::hermiticity_deviation() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const { return hermitian_eigenvalues(m_).minCoeff(); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

void DensityMatrix::check(double tol, double eig_floor) const {
  if (hermiticity_deviation() > tol)
    throw InvariantError("density matrix not Hermitian (deviation " +
                         std::to_string(hermiticity_deviation()) + ")");
  if (trace_deviation() > tol)
    throw InvariantError("density matrix trace deviates from 1 by " +
                         std::to_string(trace_deviation()));
  double lo = min_eigenvalue();
  if (lo < -eig_floor)
    throw InvariantError("density matrix has negative eigenvalue " + std::to_string(lo));
}

int coherence_order(int i, int j, int n) {
  if (n < 1 || n > kMaxQubits) throw std::out_of_range("qubit count must be 1..3");
  const int dim = 1 << n;
  if (i < 0 || j < 0 || i >= dim || j >= dim)
    throw std::out_of_range("basis index out of range for " + std::to_string(n) + " qubits");
  return std::popcount(static_cast<unsigned>(j)) - std::popcount(static_cast<unsigned>(i));
}

Eigen::MatrixXi coherence_order_table(int n) {
  if (n < 1 || n > kMaxQubits) throw std::out_of_range("qubit count must be 1..3");
  const int dim = 1 << n;
  Eigen::MatrixXi t(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) t(i, j) = coherence_order(i, j, n);
  return t;
}

std::map<int, Mat> decompose_by_order(const DensityMatrix& rho) {
  const int n = rho.qubits();
  const int dim = rho.dim();
  std::map<int, Mat> parts;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      cd v = rho(i, j);
      if (v == cd(0.0, 0.0)) continue;
      int k = coherence_order(i, j, n);
      auto it = parts.find(k);
      if (it == parts.end()) it = parts.emplace(k, Mat::Zero(dim, dim)).first;
      it->second(i, j) = v;
    }
  }
  return parts;
}

double coherence_amplitude(const DensityMatrix& rho, int i, int j) {
  const int dim = rho.dim();
  if (i < 0 || j < 0 || i >= dim || j >= dim) throw std::out_of_range("element index out of range");
  if (i == j) throw std::invalid_argument("coherence amplitude requested for a diagonal element");
  return std::abs(rho(i, j));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.qubits();
  if (keep.empty()) throw std::invalid_argument("partial trace: keep set is empty");
  std::vector<bool> seen(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n) throw std::out_of_range("partial trace: qubit index out of range");
    if (seen[q]) throw std::invalid_argument("partial trace: duplicate qubit in keep set");
    seen[q] = true;
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!seen[q]) traced.push_back(q);

  const int k = static_cast<int>(keep.size());
  const int out_dim = 1 << k;
  const int env_dim = 1 << traced.size();
  auto bit = [n](int q) { return 1 << (n - 1 - q); };
  auto compose = [&](int sub, int env) {
    int b = 0;
    for (int a = 0; a < k; ++a)
      if (sub & (1 << (k - 1 - a))) b |= bit(keep[a]);
    const int e = static_cast<int>(traced.size());
    for (int a = 0; a < e; ++a)
      if (env & (1 << (e - 1 - a))) b |= bit(traced[a]);
    return b;
  };
  Mat out = Mat::Zero(out_dim, out_dim);
  for (int r = 0; r < out_dim; ++r)
    for (int c = 0; c < out_dim; ++c)
      for (int e = 0; e < env_dim; ++e) out(r, c) += rho(compose(r, e), compose(c, e));
  return DensityMatrix(std::move(out));
}

Mat psd_sqrt(const Mat& m) {
  Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("concurrence requires a two-qubit state");
  Mat yy = Mat::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Mat& r = rho.matrix();
  const Mat tilde = yy * r.conjugate() * yy;
  // Eigenvalues of rho * tilde are real and non-negative. Zero them below
  // round-off first: a 1e-17 residue would otherwise add ~3e-9 after the root.
  Eigen::ComplexEigenSolver<Mat> es(r * tilde, false);
  Eigen::VectorXd ev = es.eigenvalues().real();
  const double floor = 1e-13 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index k = 0; k < ev.size(); ++k) ev(k) = ev(k) > floor ? std::sqrt(ev(k)) : 0.0;
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return std::max(0.0, ev(0) - ev(1) - ev(2) - ev(3));
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  Mat s = psd_sqrt(rho.matrix());
  Eigen::VectorXd ev = hermitian_eigenvalues(s * sigma.matrix() * s).cwiseMax(0.0);
  double f = ev.cwiseSqrt().sum();
  return std::clamp(f * f, 0.0, 1.0);
}

nlohmann::json to_json(const DensityMatrix& rho) {
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < rho.dim(); ++i)
    for (int j = 0; j < rho.dim(); ++j) entries.push_back({rho(i, j).real(), rho(i, j).imag()});
  return {{"dim", rho.dim()}, {"entries", entries}};
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw ConfigError("density matrix JSON needs 'dim' and 'entries'");
  const int dim = j.at("dim").get<int>();
  qubits_for_dim(dim);
  const auto& e = j.at("entries");
  if (!e.is_array() || static_cast<int>(e.size()) != dim * dim)
    throw ConfigError("density matrix JSON: expected " + std::to_string(dim * dim) + " entries");
  Mat m(dim, dim);
  for (int k = 0; k < dim * dim; ++k) {
    const auto& z = e[k];
    if (!z.is_array() || z.size() != 2) throw ConfigError("density matrix JSON: entry must be [re, im]");
    m(k / dim, k % dim) = cd(z[0].get<double>(), z[1].get<double>());
  }
  return DensityMatrix(std::move(m));
}

}  // namespace mqc
