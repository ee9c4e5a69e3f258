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

#include "mqc/spinsys.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>

namespace mqc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTimeEps = 1e-13;

int bit_of(int b, int q) { return (b >> (2 - q)) & 1; }
double spin_sign(int b, int q) { return bit_of(b, q) == 0 ? 1.0 : -1.0; }

void require_three_qubits(const DensityMatrix& rho) {
  if (rho.dim() != 8) throw std::invalid_argument("spin-system evolution requires a three-qubit state");
}

Mat2 rotation2(double theta, double phi) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const cd i(0.0, 1.0);
  Mat2 r;
  r << c, -i * s * std::exp(-i * phi), -i * s * std::exp(i * phi), c;
  return r;
}

Mat8 kron3(const Mat2& a, const Mat2& b, const Mat2& c) {
  Mat8 out;
  for (int r = 0; r < 8; ++r)
    for (int k = 0; k < 8; ++k)
      out(r, k) = a(r >> 2, k >> 2) * b((r >> 1) & 1, (k >> 1) & 1) * c(r & 1, k & 1);
  return out;
}

Mat8 embed(int q, const Mat2& op) {
  std::array<Mat2, 3> f{Mat2::Identity(), Mat2::Identity(), Mat2::Identity()};
  f[q] = op;
  return kron3(f[0], f[1], f[2]);
}

Mat8 expm_hermitian(const Mat8& h_hz, double dt) {
  Eigen::SelfAdjointEigenSolver<Mat8> es(h_hz);
  Vec8 ph;
  for (int k = 0; k < 8; ++k) ph(k) = std::exp(cd(0.0, -kTwoPi * es.eigenvalues()(k) * dt));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double effective_flip(const PulseEvent& e, const SpinSystem& sys) {
  return e.flip_rad * (1.0 + sys.pulse_error.flip_error);
}

Mat8 instantaneous(const PulseEvent& e, const SpinSystem& sys) {
  std::array<Mat2, 3> f{Mat2::Identity(), Mat2::Identity(), Mat2::Identity()};
  const double theta = effective_flip(e, sys);
  for (std::size_t k = 0; k < e.targets.size(); ++k)
    f[e.targets[k]] = rotation2(theta, e.phases_rad[k] + sys.pulse_error.phase_error_rad);
  return kron3(f[0], f[1], f[2]);
}

// rf Hamiltonian (Hz) of a finite-width event.
Mat8 rf_hamiltonian(const PulseEvent& e, const SpinSystem& sys) {
  const double amp = effective_flip(e, sys) / (kTwoPi * e.duration_s);
  Mat2 x, y;
  x << 0, 1, 1, 0;
  y << 0, cd(0, -1), cd(0, 1), 0;
  Mat8 h = Mat8::Zero();
  for (std::size_t k = 0; k < e.targets.size(); ++k) {
    const double phi = e.phases_rad[k] + sys.pulse_error.phase_error_rad;
    h += embed(e.targets[k], (amp / 2.0) * (std::cos(phi) * x + std::sin(phi) * y));
  }
  return h;
}

Mat8 energy_diagonal(const SpinSystem& sys) {
  auto e = energies(sys);
  Mat8 h = Mat8::Zero();
  for (int b = 0; b < 8; ++b) h(b, b) = e[b];
  return h;
}

Mat8 dephasing_factor(const SpinSystem& sys, double dt) {
  Mat8 f;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) f(a, b) = std::exp(-dephasing_rate(a, b, sys.noise) * dt);
  return f;
}

}  // namespace

double SpinSystem::coupling(int q, int r) const {
  if (q > r) std::swap(q, r);
  if (q == 0 && r == 1) return couplings_hz[0];
  if (q == 0 && r == 2) return couplings_hz[1];
  if (q == 1 && r == 2) return couplings_hz[2];
  throw std::out_of_range("coupling needs two distinct qubits in 0..2");
}

void SpinSystem::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  for (int q = 0; q < 3; ++q) {
    if (!finite(offsets_hz[q]) || !finite(couplings_hz[q]))
      throw std::invalid_argument("offsets and couplings must be finite");
    if (!(noise.gamma_s[q] >= 0.0)) throw std::invalid_argument("dephasing rates must be >= 0");
    if (!(disorder.offset_sigma_hz[q] >= 0.0)) throw std::invalid_argument("disorder widths must be >= 0");
  }
  if (!(noise.gamma_corr_s >= 0.0)) throw std::invalid_argument("dephasing rates must be >= 0");
  if (!(pulse_error.flip_error > -1.0)) throw std::invalid_argument("flip error must exceed -1");
  if (!(pulse_error.duration_s >= 0.0)) throw std::invalid_argument("pulse duration must be >= 0");
  if (!finite(pulse_error.phase_error_rad)) throw std::invalid_argument("phase error must be finite");
  if (!(disorder.common_sigma_hz >= 0.0) || !(disorder.flip_sigma >= 0.0))
    throw std::invalid_argument("disorder widths must be >= 0");
  if (disorder.shots < 0) throw std::invalid_argument("disorder shot count must be >= 0");
}

double energy(int b, const SpinSystem& sys) {
  if (b < 0 || b > 7) throw std::out_of_range("basis index out of range");
  double e = 0.0;
  for (int q = 0; q < 3; ++q) e += sys.offsets_hz[q] / 2.0 * spin_sign(b, q);
  e += sys.couplings_hz[0] / 4.0 * spin_sign(b, 0) * spin_sign(b, 1);
  e += sys.couplings_hz[1] / 4.0 * spin_sign(b, 0) * spin_sign(b, 2);
  e += sys.couplings_hz[2] / 4.0 * spin_sign(b, 1) * spin_sign(b, 2);
  return e;
}

std::array<double, 8> energies(const SpinSystem& sys) {
  std::array<double, 8> e{};
  for (int b = 0; b < 8; ++b) e[b] = energy(b, sys);
  return e;
}

double dephasing_rate(int a, int b, const NoiseModel& noise) {
  double r = 0.0;
  for (int q = 0; q < 3; ++q)
    if (bit_of(a, q) != bit_of(b, q)) r += noise.gamma_s[q];
  const int dm = std::popcount(static_cast<unsigned>(b)) - std::popcount(static_cast<unsigned>(a));
  return r + noise.gamma_corr_s * dm * dm;
}

DensityMatrix free_propagate(const DensityMatrix& rho, const SpinSystem& sys, double t) {
  require_three_qubits(rho);
  if (!(t >= 0.0)) throw std::invalid_argument("free evolution time must be >= 0");
  auto e = energies(sys);
  Mat out = rho.matrix();
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      out(a, b) *= std::exp(cd(-dephasing_rate(a, b, sys.noise) * t, -kTwoPi * (e[a] - e[b]) * t));
  return DensityMatrix(std::move(out));
}

DensityMatrix free_propagate_averaged(const DensityMatrix& rho, const SpinSystem& sys, double t) {
  DensityMatrix out = free_propagate(rho, sys, t);
  if (!sys.disorder.enabled()) return out;
  const auto& d = sys.disorder;
  const double k = 2.0 * std::numbers::pi * std::numbers::pi * t * t;
  Mat m = out.matrix();
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      double var = 0.0;
      for (int q = 0; q < 3; ++q)
        if (bit_of(a, q) != bit_of(b, q)) var += d.offset_sigma_hz[q] * d.offset_sigma_hz[q];
      const int dm = std::popcount(static_cast<unsigned>(b)) - std::popcount(static_cast<unsigned>(a));
      var += d.common_sigma_hz * d.common_sigma_hz * dm * dm;
      m(a, b) *= std::exp(-k * var);
    }
  }
  return DensityMatrix(std::move(m));
}

Mat8 pulse_propagator(const PulseEvent& pulse, const SpinSystem& sys) {
  validate_event(pulse);
  if (pulse.duration_s == 0.0) return instantaneous(pulse, sys);
  if (pulse.flip_rad == 0.0)
    throw std::invalid_argument("finite-width pulse with zero flip angle has no defined rf amplitude");
  Mat8 h = rf_hamiltonian(pulse, sys);
  if (sys.pulse_error.internal_hamiltonian) h += energy_diagonal(sys);
  return expm_hermitian(h, pulse.duration_s);
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat8& u) {
  require_three_qubits(rho);
  return DensityMatrix(Mat(u * rho.matrix() * u.adjoint()));
}

void validate_schedule(const std::vector<PulseEvent>& events, double duration_s) {
  if (!(duration_s >= 0.0)) throw std::invalid_argument("program duration must be >= 0");
  std::array<double, 3> busy_until{-1.0, -1.0, -1.0};
  double last_start = -1.0;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    validate_event(e);
    if (e.start_s < -kTimeEps) throw std::invalid_argument("event starts before time 0");
    if (e.start_s < last_start - kTimeEps) throw std::invalid_argument("events are not sorted by start time");
    last_start = e.start_s;
    if (e.end_s() > duration_s + 1e-12)
      throw std::invalid_argument("event " + std::to_string(k) + " ends past the program duration");
    for (int q : e.targets) {
      if (e.start_s < busy_until[q] - kTimeEps)
        throw std::invalid_argument("overlapping events on qubit " + std::to_string(q + 1));
      busy_until[q] = e.end_s();
    }
  }
}

DensityMatrix apply_sequence(const DensityMatrix& rho, const SpinSystem& sys,
                             const std::vector<PulseEvent>& events, double duration_s) {
  require_three_qubits(rho);
  return CompiledProgram(sys, Program{events, duration_s}).apply(rho);
}

CompiledProgram::CompiledProgram(const SpinSystem& sys, const Program& program)
    : duration_s_(program.duration_s) {
  validate_schedule(program.events, program.duration_s);
  const auto e = energies(sys);

  std::vector<double> cuts{0.0, program.duration_s};
  for (const auto& ev : program.events) {
    cuts.push_back(ev.start_s);
    cuts.push_back(ev.end_s());
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> bounds;
  for (double c : cuts)
    if (bounds.empty() || c > bounds.back() + kTimeEps) bounds.push_back(c);

  std::vector<const PulseEvent*> instant, finite;
  for (const auto& ev : program.events) (ev.duration_s == 0.0 ? instant : finite).push_back(&ev);
  std::size_t next_instant = 0;

  auto flush_instant = [&](double upto) {
    while (next_instant < instant.size() && instant[next_instant]->start_s <= upto + kTimeEps) {
      Op op{Kind::Pulse, Mat8::Ones(), instantaneous(*instant[next_instant], sys), Vec8::Ones()};
      ops_.push_back(std::move(op));
      ++next_instant;
    }
  };

  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double a = bounds[s], b = bounds[s + 1], dt = b - a;
    flush_instant(a);
    Mat8 h = Mat8::Zero();
    bool driven = false;
    for (const auto* ev : finite) {
      if (ev->start_s <= a + kTimeEps && ev->end_s() >= b - kTimeEps) {
        h += rf_hamiltonian(*ev, sys);
        driven = true;
      }
    }
    if (!driven) {
      Op op{Kind::Free, Mat8(), Mat8::Identity(), Vec8()};
      for (int i = 0; i < 8; ++i) {
        op.phases(i) = std::exp(cd(0.0, -kTwoPi * e[i] * dt));
        for (int j = 0; j < 8; ++j)
          op.factor(i, j) = std::exp(cd(-dephasing_rate(i, j, sys.noise) * dt, -kTwoPi * (e[i] - e[j]) * dt));
      }
      ops_.push_back(std::move(op));
    } else {
      if (sys.pulse_error.internal_hamiltonian) h += energy_diagonal(sys);
      ops_.push_back(Op{Kind::SplitPulse, dephasing_factor(sys, dt / 2.0), expm_hermitian(h, dt), Vec8::Ones()});
    }
  }
  flush_instant(program.duration_s);
}

void CompiledProgram::apply_in_place(Mat8& rho) const {
  Mat8 tmp;
  for (const auto& op : ops_) {
    switch (op.kind) {
      case Kind::Free:
        rho = rho.cwiseProduct(op.factor);
        break;
      case Kind::Pulse:
        tmp.noalias() = op.u * rho;
        rho.noalias() = tmp * op.u.adjoint();
        break;
      case Kind::SplitPulse:
        rho = rho.cwiseProduct(op.factor);
        tmp.noalias() = op.u * rho;
        rho.noalias() = tmp * op.u.adjoint();
        rho = rho.cwiseProduct(op.factor);
        break;
    }
  }
}

DensityMatrix CompiledProgram::apply(const DensityMatrix& rho) const {
  require_three_qubits(rho);
  Mat8 m = rho.matrix();
  apply_in_place(m);
  return DensityMatrix(Mat(m));
}

Mat8 CompiledProgram::unitary() const {
  Mat8 u = Mat8::Identity();
  for (const auto& op : ops_) {
    if (op.kind == Kind::Free)
      u = op.phases.asDiagonal() * u;
    else
      u = op.u * u;
  }
  return u;
}

std::vector<SpinSystem> disorder_realizations(const SpinSystem& sys) {
  if (!sys.disorder.enabled()) return {sys};
  const int n = sys.disorder.shots;
  constexpr int kDims = 5;  // three offsets, common offset, flip scale
  std::mt19937_64 rng(sys.disorder.seed);
  boost::math::normal_distribution<double> normal;
  std::array<std::vector<double>, kDims> z;
  for (int d = 0; d < kDims; ++d) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng() % static_cast<std::uint64_t>(i + 1)]);
    z[d].resize(n);
    for (int i = 0; i < n; ++i) z[d][i] = boost::math::quantile(normal, (perm[i] + 0.5) / n);
  }
  std::vector<SpinSystem> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    SpinSystem s = sys;
    s.disorder = DisorderModel{};
    for (int q = 0; q < 3; ++q)
      s.offsets_hz[q] += sys.disorder.offset_sigma_hz[q] * z[q][i] + sys.disorder.common_sigma_hz * z[3][i];
    s.pulse_error.flip_error += sys.disorder.flip_sigma * z[4][i];
    out.push_back(s);
  }
  return out;
}

}  // namespace mqc
