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

#include "mqc/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mqc/data.hpp"
#include "mqc/errors.hpp"

namespace mqc {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Mat8 kron3(const Mat2& a, const Mat2& b, const Mat2& c) {
  Mat8 out;
  for (int r = 0; r < 8; ++r)
    for (int k = 0; k < 8; ++k)
      out(r, k) = a(r >> 2, k >> 2) * b((r >> 1) & 1, (k >> 1) & 1) * c(r & 1, k & 1);
  return out;
}

void check_qubit(int q) {
  if (q < 0 || q > 2) throw std::out_of_range("qubit index must be 0..2");
}

int parse_bits(const std::string& s) {
  if (s.size() != 3 || s.find_first_not_of("01") != std::string::npos)
    throw ConfigError("basis label '" + s + "' must be three binary digits");
  return std::stoi(s, nullptr, 2);
}

}  // namespace

namespace gates {

Mat2 hadamard() {
  Mat2 h;
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

Mat2 rotation(double theta, double phi) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const cd i(0.0, 1.0);
  Mat2 r;
  r << c, -i * s * std::exp(-i * phi), -i * s * std::exp(i * phi), c;
  return r;
}

Mat2 ry(double theta) { return rotation(theta, std::numbers::pi / 2.0); }

Mat8 single(int q, const Mat2& op) {
  check_qubit(q);
  std::array<Mat2, 3> f{Mat2::Identity(), Mat2::Identity(), Mat2::Identity()};
  f[q] = op;
  return kron3(f[0], f[1], f[2]);
}

Mat8 controlled(int control, int target, const Mat2& op) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw std::invalid_argument("control and target must differ");
  Mat2 p0 = Mat2::Zero(), p1 = Mat2::Zero();
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  std::array<Mat2, 3> a{Mat2::Identity(), Mat2::Identity(), Mat2::Identity()};
  std::array<Mat2, 3> b = a;
  a[control] = p0;
  b[control] = p1;
  b[target] = op;
  return kron3(a[0], a[1], a[2]) + kron3(b[0], b[1], b[2]);
}

Mat8 cnot(int control, int target) { return controlled(control, target, pauli_x()); }

}  // namespace gates

Mat8 Gate::matrix() const {
  auto need = [&](std::size_t n) {
    if (qubits.size() != n)
      throw std::invalid_argument("gate " + name + " takes " + std::to_string(n) + " qubit(s)");
  };
  if (name == "H") return need(1), gates::single(qubits[0], gates::hadamard());
  if (name == "X") return need(1), gates::single(qubits[0], gates::pauli_x());
  if (name == "Y") return need(1), gates::single(qubits[0], gates::pauli_y());
  if (name == "Z") return need(1), gates::single(qubits[0], gates::pauli_z());
  if (name == "RY") return need(1), gates::single(qubits[0], gates::ry(angle_rad));
  if (name == "CNOT") return need(2), gates::cnot(qubits[0], qubits[1]);
  if (name == "CRY") return need(2), gates::controlled(qubits[0], qubits[1], gates::ry(angle_rad));
  throw std::invalid_argument("unknown gate '" + name + "'");
}

std::string describe(const Gate& g) {
  std::ostringstream o;
  o << g.name;
  for (std::size_t k = 0; k < g.qubits.size(); ++k) o << (k == 0 ? " q" : ",q") << g.qubits[k] + 1;
  if (g.name == "RY" || g.name == "CRY") o << " (" << g.angle_rad / kDeg << " deg)";
  return o.str();
}

int StateSpec::order() const { return coherence_order(row, col, 3); }

std::vector<int> StateSpec::coherence_qubits() const {
  std::vector<int> q;
  for (int k = 0; k < 3; ++k)
    if (((row ^ col) >> (2 - k)) & 1) q.push_back(k);
  return q;
}

const StateCatalog& StateCatalog::builtin() {
  static const StateCatalog c = parse(data::embedded("states.json"), "states.json");
  return c;
}

StateCatalog StateCatalog::parse(std::string_view json_text, const std::string& source) {
  StateCatalog cat;
  try {
    auto doc = nlohmann::json::parse(json_text);
    for (const auto& js : doc.at("states")) {
      StateSpec s;
      s.id = js.at("id").get<std::string>();
      s.ket = js.value("ket", "");
      auto el = js.at("element").get<std::vector<int>>();
      if (el.size() != 2 || el[0] < 0 || el[0] > 7 || el[1] < 0 || el[1] > 7 || el[0] == el[1])
        throw ConfigError(source + ": state " + s.id + ": element must be two distinct basis indices 0..7");
      s.row = el[0];
      s.col = el[1];
      for (const auto& g : js.at("prep")) {
        Gate gate;
        gate.name = g.at("gate").get<std::string>();
        for (int q : g.at("qubits").get<std::vector<int>>()) {
          if (q < 1 || q > 3) throw ConfigError(source + ": state " + s.id + ": qubit numbers run 1..3");
          gate.qubits.push_back(q - 1);
        }
        gate.angle_rad = g.value("angle_deg", 0.0) * kDeg;
        gate.matrix();  // rejects unknown gates and arity errors
        s.prep.push_back(gate);
      }
      s.expected = Vec8::Zero();
      for (const auto& [label, z] : js.at("amplitudes").items())
        s.expected(parse_bits(label)) = cd(z.at(0).get<double>(), z.at(1).get<double>());
      if (s.expected.norm() == 0.0) throw ConfigError(source + ": state " + s.id + " has no amplitudes");
      s.expected.normalize();
      if (cat.has(s.id)) throw ConfigError(source + ": duplicate state id " + s.id);
      cat.states_.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cat;
}

const StateSpec& StateCatalog::get(const std::string& id) const {
  for (const auto& s : states_)
    if (s.id == id) return s;
  std::string known;
  for (const auto& s : states_) known += (known.empty() ? "" : ", ") + s.id;
  throw std::invalid_argument("unknown state '" + id + "' (known: " + known + ")");
}

bool StateCatalog::has(const std::string& id) const {
  return std::any_of(states_.begin(), states_.end(), [&](const StateSpec& s) { return s.id == id; });
}

std::vector<std::string> StateCatalog::ids() const {
  std::vector<std::string> out;
  for (const auto& s : states_) out.push_back(s.id);
  return out;
}

Vec8 run_circuit(const std::vector<Gate>& gates) {
  Vec8 psi = Vec8::Zero();
  psi(0) = 1.0;
  for (const auto& g : gates) psi = g.matrix() * psi;
  return psi;
}

DensityMatrix prepare(const std::string& id, const StateCatalog& catalog) {
  return DensityMatrix::pure(run_circuit(catalog.get(id).prep));
}

std::string_view star_program_text() { return data::embedded("star_program.txt"); }

Program star_circuit_nmr(const SpinSystem& sys) { return star_circuit_nmr(sys, star_program_text()); }

Program star_circuit_nmr(const SpinSystem& sys, std::string_view program_text) {
  const double width_pi = sys.pulse_error.duration_s;
  Program prog;
  double t = 0.0;

  auto pulse_at = [&](double start, double width, std::vector<int> targets, double flip, double phase) {
    PulseEvent e;
    e.start_s = start;
    e.duration_s = width;
    e.phases_rad.assign(targets.size(), phase);
    e.targets = std::move(targets);
    e.flip_rad = flip;
    prog.events.push_back(std::move(e));
  };
  auto hard = [&](std::vector<int> targets, double flip, double phase) {
    const double w = width_pi * flip / std::numbers::pi;
    pulse_at(t, w, std::move(targets), flip, phase);
    t += w;
  };

  std::istringstream in{std::string(program_text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    auto fail = [&](const std::string& msg) {
      throw ConfigError("star program line " + std::to_string(lineno) + ": " + msg);
    };
    if (op == "version") continue;
    if (op == "rot") {
      int q;
      double angle, phase;
      if (!(ls >> q >> angle >> phase) || q < 1 || q > 3) fail("expected 'rot <qubit 1..3> <angle> <phase>'");
      if (angle <= 0.0) fail("rotation angle must be positive");
      hard({q - 1}, angle * kDeg, phase * kDeg);
    } else if (op == "zz") {
      int q, r;
      if (!(ls >> q >> r) || q < 1 || q > 3 || r < 1 || r > 3 || q == r) fail("expected 'zz <q> <r>'");
      --q;
      --r;
      const int s = 3 - q - r;
      const double j = sys.coupling(q, r);
      if (j == 0.0)
        throw std::invalid_argument("star program needs a nonzero J between qubits " + std::to_string(q + 1) +
                                    " and " + std::to_string(r + 1));
      if (j < 0.0) {
        hard({q, r}, std::numbers::pi, std::numbers::pi / 2.0);
        hard({q, r}, std::numbers::pi, 0.0);
      }
      const double tau = 1.0 / (2.0 * std::abs(j));
      const double w = width_pi;
      if (tau <= 2.0 * w) fail("coupling window shorter than its refocusing pulses");
      const double t0 = t;
      pulse_at(t0 + tau / 4.0 - w / 2.0, w, {s}, std::numbers::pi, 0.0);
      pulse_at(t0 + tau / 2.0 - w / 2.0, w, {q, r}, std::numbers::pi, 0.0);
      pulse_at(t0 + 3.0 * tau / 4.0 - w / 2.0, w, {s}, std::numbers::pi, 0.0);
      pulse_at(t0 + tau, w, {q, r}, std::numbers::pi, 0.0);
      t = t0 + tau + w;
    } else {
      fail("unknown instruction '" + op + "'");
    }
  }
  // Events from different instructions can share a start time; keep the
  // order stable so same-time pulses apply in program order.
  std::stable_sort(prog.events.begin(), prog.events.end(),
                   [](const PulseEvent& a, const PulseEvent& b) { return a.start_s < b.start_s; });
  prog.duration_s = t;
  return prog;
}

Mat8 readout_unitary(std::string_view word) {
  if (word.size() != 3) throw std::invalid_argument("readout word must have three letters");
  std::array<Mat2, 3> f{Mat2::Identity(), Mat2::Identity(), Mat2::Identity()};
  for (int q = 0; q < 3; ++q) {
    switch (word[q]) {
      case 'I': break;
      case 'X': f[q] = gates::rotation(std::numbers::pi / 2.0, 0.0); break;
      case 'Y': f[q] = gates::rotation(std::numbers::pi / 2.0, std::numbers::pi / 2.0); break;
      default:
        throw std::invalid_argument("readout word '" + std::string(word) + "' may only use I, X and Y");
    }
  }
  return kron3(f[0], f[1], f[2]);
}

DensityMatrix readout(const DensityMatrix& rho, std::string_view word) {
  if (rho.dim() != 8) throw std::invalid_argument("readout acts on three-qubit states");
  return apply_unitary(rho, readout_unitary(word));
}

double single_quantum_amplitude(const Mat& m) {
  const int dim = static_cast<int>(m.rows());
  int n = 0;
  while ((1 << n) < dim) ++n;
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (std::abs(coherence_order(i, j, n)) == 1) s += std::abs(m(i, j));
  return s;
}

double readout_signal(const DensityMatrix& rho, std::string_view word, int i, int j) {
  if (rho.dim() != 8) throw std::invalid_argument("readout acts on three-qubit states");
  if (i == j) throw std::invalid_argument("readout signal needs an off-diagonal element");
  Mat part = Mat::Zero(8, 8);
  part(i, j) = rho(i, j);
  part(j, i) = rho(j, i);
  const Mat8 u = readout_unitary(word);
  return single_quantum_amplitude(u * part * u.adjoint());
}

}  // namespace mqc
