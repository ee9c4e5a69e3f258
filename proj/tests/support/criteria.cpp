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

#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mqc/circuits.hpp"
#include "mqc/ddseq.hpp"
#include "mqc/qmat.hpp"
#include "mqc/run_config.hpp"
#include "mqc/runner.hpp"
#include "mqc/spinsys.hpp"
#include "oracles.hpp"

namespace mqc::criteria {

namespace {

using json = nlohmann::json;

json read_golden(const std::string& name) {
  std::ifstream f(golden_dir() + "/" + name);
  if (!f) throw std::runtime_error("missing golden file " + name);
  return json::parse(f);
}

std::string sci(double v) {
  std::ostringstream o;
  o << std::scientific << std::setprecision(2) << v;
  return o.str();
}

std::string fixed(double v, int prec = 2) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(prec) << v;
  return o.str();
}

SpinSystem quiet(SpinSystem sys) {
  sys.noise = NoiseModel{};
  sys.disorder = DisorderModel{};
  sys.pulse_error = PulseErrorModel{};
  return sys;
}

StarOptions star_options(const RunConfig& cfg) {
  StarOptions o;
  o.family = cfg.star.family;
  o.cycle_s = cfg.star.cycle_s;
  o.nmr_prep = cfg.star.nmr_prep;
  o.tomography = cfg.star.tomography;
  o.tomo.noise_sigma = cfg.tomo.noise_sigma;
  o.tomo.seed = cfg.tomo.seed;
  o.threads = cfg.threads;
  return o;
}

struct Deviation {
  double trace = 0.0;
  double herm = 0.0;
  double neg = 0.0;  // most negative eigenvalue, as a positive number
  void add(const DensityMatrix& r) {
    trace = std::max(trace, r.trace_deviation());
    herm = std::max(herm, r.hermiticity_deviation());
    neg = std::max(neg, -r.min_eigenvalue());
  }
  bool ok(double tol) const { return trace <= tol && herm <= tol && neg <= tol; }
};

}  // namespace

std::string golden_dir() {
#ifdef MQC_GOLDEN_DIR
  return MQC_GOLDEN_DIR;
#else
  return "core/data/golden";
#endif
}

Outcome coherence_order_golden() {
  const json g = read_golden("coherence_orders.json");
  Eigen::MatrixXi table;
  double best_ms = 1e9;
  for (int rep = 0; rep < 5; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    table = coherence_order_table(3);
    best_ms = std::min(best_ms, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  int mismatches = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (table(i, j) != g["orders"][i][j].get<int>()) ++mismatches;
  return {mismatches == 0 && best_ms < 1.0,
          std::to_string(mismatches) + " mismatching entries, " + sci(best_ms) + " ms"};
}

Outcome star_state_golden() {
  const json g = read_golden("star_state.json");
  const DensityMatrix rho = prepare("star");
  const double scale = g["scale"].get<double>();
  double worst = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) worst = std::max(worst, std::abs(rho(i, j) - scale * g["pattern"][i][j].get<double>()));
  const double ac = concurrence(partial_trace(rho, {0, 2}));
  const double bc = concurrence(partial_trace(rho, {1, 2}));
  const bool pass = worst <= 1e-12 && std::abs(ac - 0.5) <= 1e-10 && std::abs(bc - 0.5) <= 1e-10;
  return {pass, "max entry error " + sci(worst) + ", C(AC) = " + fixed(ac, 12) + ", C(BC) = " + fixed(bc, 12)};
}

Outcome modified_cycles_identity() {
  SpinSystem sys = quiet(SpinSystem{});
  sys.offsets_hz = {0.0, 0.0, 0.0};
  sys.couplings_hz = {0.0, 0.0, 0.0};
  double worst = 0.0;
  std::string worst_name;
  for (Family f : {Family::XY8, Family::UR12, Family::XY16, Family::KDD20}) {
    for (std::vector<int> pair : {std::vector<int>{0, 1}, {0, 2}, {1, 2}, {2, 0}}) {
      const DDCycle c = modify(generate(f, 0.5e-3, 20e-6, pair));
      const Mat8 u = cycle_propagator(c, sys, true);
      const double d = oracle::phase_distance(u * u, Mat8::Identity());
      if (d >= worst) {
        worst = d;
        worst_name = c.name;
      }
    }
  }
  return {worst <= 1e-10, "worst two-cycle deviation from identity " + sci(worst) + " (" + worst_name + ")"};
}

Outcome refocusing() {
  const SpinSystem sys = quiet(SpinSystem{});
  const std::vector<double> xy8{0, 90, 0, 90, 90, 0, 90, 0};
  const double tau = 0.5e-3;
  const double tp = 10e-6;
  const Mat8 h = oracle::hamiltonian_hz(sys);
  double lib_vs_oracle = 0.0;
  double vs_deleted = 0.0;
  for (int q = 0; q < 3; ++q) {
    const DDCycle c = generate(Family::XY8, tau, tp, {q});
    const Mat8 u = cycle_propagator(c, sys, true);
    const Mat8 brute = oracle::dd_cycle(h, xy8, tau, tp, {q});
    SpinSystem reduced = sys;
    reduced.offsets_hz[q] = 0.0;
    for (int r = 0; r < 3; ++r)
      if (r != q) reduced.couplings_hz[q + r - 1] = 0.0;  // pair index (0,1)->0 (0,2)->1 (1,2)->2
    const Mat8 target = oracle::evolve(oracle::hamiltonian_hz(reduced), c.duration_s);
    lib_vs_oracle = std::max(lib_vs_oracle, oracle::phase_distance(u, brute));
    vs_deleted = std::max(vs_deleted, oracle::phase_distance(brute, target));
  }
  // All three spins pulsed together: offsets vanish but every ZZ term survives.
  const DDCycle all = generate(Family::XY8, tau, tp, {0, 1, 2});
  const Mat8 u3 = cycle_propagator(all, sys, true);
  SpinSystem offsets_only = sys;
  offsets_only.offsets_hz = {0.0, 0.0, 0.0};
  SpinSystem nothing = offsets_only;
  nothing.couplings_hz = {0.0, 0.0, 0.0};
  const double keeps_j = oracle::phase_distance(u3, oracle::evolve(oracle::hamiltonian_hz(offsets_only), all.duration_s));
  const double deletes_j = oracle::phase_distance(u3, oracle::evolve(oracle::hamiltonian_hz(nothing), all.duration_s));
  const bool pass = lib_vs_oracle <= 1e-9 && vs_deleted <= 1e-9 && keeps_j <= 1e-9 && deletes_j > 1e-2;
  return {pass, "library vs oracle " + sci(lib_vs_oracle) + ", oracle vs reduced Hamiltonian " + sci(vs_deleted) +
                    "; DD3sp vs J-kept " + sci(keeps_j) + ", vs J-deleted " + sci(deletes_j)};
}

Outcome analytic_dephasing() {
  SpinSystem sys = quiet(SpinSystem{});
  sys.noise.gamma_s = {0.3, 0.4, 0.5};
  sys.noise.gamma_corr_s = 0.1;
  const double rate = 0.3 + 0.4 + 0.5 + 9 * 0.1;
  const DensityMatrix psi3 = prepare("psi3");
  const auto curve = run_decay("psi3", Protocol::free_evolution(), sys, uniform_grid(0.7, 15));
  double analytic = 0.0;
  for (std::size_t k = 0; k < curve.times_s.size(); ++k)
    analytic = std::max(analytic, std::abs(curve.values[k] - std::exp(-rate * curve.times_s[k])));

  const oracle::Mat64 l = oracle::lindblad(sys);
  std::mt19937_64 rng(11);
  double superop = 0.0;
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix rho = k == 0 ? psi3 : oracle::random_state(rng, 1 + k);
    for (double t : {0.013, 0.2, 0.7}) {
      const Mat8 ref = oracle::apply_superop(l, rho.matrix(), t);
      superop = std::max(superop, (free_propagate(rho, sys, t).matrix() - ref).cwiseAbs().maxCoeff());
    }
  }

  SpinSystem corr_only = sys;
  corr_only.noise.gamma_s = {0.0, 0.0, 0.0};
  corr_only.noise.gamma_corr_s = 5.0;
  const DensityMatrix rho = oracle::random_state(rng, 8);
  const DensityMatrix out = free_propagate(rho, corr_only, 0.9);
  double zero_order = 0.0;
  bool rate_zero = true;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (coherence_order(i, j, 3) == 0) {
        rate_zero = rate_zero && dephasing_rate(i, j, corr_only.noise) == 0.0;
        zero_order = std::max(zero_order, std::abs(std::abs(out(i, j)) - std::abs(rho(i, j))));
      }
  const bool pass = analytic <= 1e-6 && superop <= 1e-6 && rate_zero && zero_order <= 1e-15;
  return {pass, "|rho18| vs exp(-(g1+g2+g3+9gc)t) " + sci(analytic) + ", vs 64x64 superoperator " + sci(superop) +
                    ", order-0 change under gamma_c " + sci(zero_order) + (rate_zero ? "" : ", nonzero order-0 rate")};
}

Outcome default_orderings() {
  const RunConfig cfg = load_run_config("", {});
  const auto t0 = std::chrono::steady_clock::now();
  const GridResult grid = run_grid(cfg);
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const OrderingReport rep = compare_to_reference(grid.cells, ReferenceTable::builtin(), 5.0);

  auto holds = [&](const std::string& state, char letter, ProtocolKind winner, ProtocolKind loser) {
    return std::any_of(rep.facts.begin(), rep.facts.end(), [&](const OrderingFact& f) {
      return f.state == state && f.fact == letter && f.winner == winner && f.loser == loser &&
             f.verdict == Verdict::Holds;
    });
  };
  using K = ProtocolKind;
  std::string failed;
  auto need = [&](const char* label, bool ok) {
    if (!ok) failed += std::string(" ") + label;
  };
  need("(a)", holds("psi3", 'a', K::DD3sp, K::FreeEv));
  for (const char* s : {"psi1a", "psi1b"})
    need("(b)", holds(s, 'a', K::DD1sp, K::FreeEv) && holds(s, 'c', K::DD1sp, K::DD3sp));
  for (const char* s : {"psi2a", "psi2b"})
    need("(c)", holds(s, 'a', K::mDD2sp, K::FreeEv) && holds(s, 'b', K::mDD2sp, K::DD3sp));
  for (const char* s : {"psi0a", "psi0b"}) need("(d)", holds(s, 'b', K::mDD2sp, K::DD3sp));
  need("runtime", runtime < 60.0);
  need("report", rep.all_hold());
  return {failed.empty(), std::to_string(rep.facts.size()) + " ordering facts, grid in " + fixed(runtime) + " s" +
                              (failed.empty() ? "" : "; failed:" + failed)};
}

Outcome robustness_gate() {
  const auto results = robustness_check();
  bool pass = true;
  std::string detail;
  for (const auto& r : results) {
    if (r.family == Family::XY4) continue;
    pass = pass && r.passes();
    detail += family_name(r.family) + " " + fixed(r.survival, 3) + " vs CPMG " + fixed(r.cpmg_survival, 3) + "; ";
  }
  return {pass && results.size() >= 4, detail.substr(0, detail.size() - 2)};
}

Outcome tomography_fidelity() {
  double worst_clean = 1.0;
  double worst_noisy = 1.0;
  for (const auto& id : StateCatalog::builtin().ids()) {
    const DensityMatrix rho = prepare(id);
    worst_clean = std::min(worst_clean, fidelity(tomography(rho), rho));
    worst_noisy = std::min(worst_noisy, fidelity(tomography(rho, {0.01, 7}), rho));
  }
  return {worst_clean >= 0.999 && worst_noisy >= 0.98,
          "worst fidelity " + fixed(worst_clean, 6) + " noiseless, " + fixed(worst_noisy, 4) + " at sigma 0.01"};
}

Outcome star_protection() {
  const RunConfig cfg = load_run_config("", {});
  const StarOptions opts = star_options(cfg);
  double worst_gap = 1.0;  // min over t >= 0.1 s of protected - free
  double ideal_dev = 0.0;
  for (auto [pair, tau] : {std::pair{std::vector<int>{0, 2}, cfg.star.tau13_s},
                           std::pair{std::vector<int>{1, 2}, cfg.star.tau23_s}}) {
    const Protocol p = Protocol::dd(ProtocolKind::mDD2sp, opts.family, tau, opts.cycle_s, pair);
    const auto times = protocol_grid(p, cfg.star.t_end_s, cfg.star.points);
    const StarCurves noisy = mqc::star_protection(cfg.system, pair, tau, times, opts);
    for (std::size_t k = 0; k < times.size(); ++k)
      if (times[k] >= 0.1) worst_gap = std::min(worst_gap, noisy.protected_curve.values[k] - noisy.free.values[k]);
    StarOptions ideal_opts = opts;
    ideal_opts.nmr_prep = false;
    ideal_opts.tomography = false;
    const StarCurves ideal = mqc::star_protection(quiet(cfg.system), pair, tau, times, ideal_opts);
    for (double c : ideal.protected_curve.values) ideal_dev = std::max(ideal_dev, std::abs(c - 0.5));
  }
  return {worst_gap >= 0.0 && ideal_dev <= 1e-9,
          "min protected - free concurrence for t >= 0.1 s " + sci(worst_gap) + ", ideal deviation from 0.5 " +
              sci(ideal_dev)};
}

Outcome channel_properties() {
  SpinSystem sys;
  sys.noise.gamma_s = {0.3, 0.4, 0.5};
  sys.noise.gamma_corr_s = 0.1;
  sys.pulse_error = {0.03, 0.02, 20e-6, true};
  SpinSystem disordered = sys;
  disordered.disorder = {{2.0, 3.0, 4.0}, 5.0, 0.02, 8, 99};

  const CompiledProgram dd(sys, unit_program(modify(generate(Family::XY8, 0.5e-3, 20e-6, {0, 2}))));
  const CompiledProgram dd3(sys, unit_program(generate(Family::KDD20, 0.3e-3, 15e-6, {0, 1, 2})));
  const Program star = star_circuit_nmr(sys);
  const auto shots = disorder_realizations(disordered);
  const std::vector<CompiledProgram> shot_programs = [&] {
    std::vector<CompiledProgram> v;
    for (std::size_t k = 0; k < 2; ++k) v.emplace_back(shots[k], unit_program(generate(Family::UR12, 0.4e-3, 0.0, {1})));
    return v;
  }();
  const std::vector<std::string> words{"III", "IYI", "XYX", "YYY"};

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> time(0.0, 0.5);
  Deviation dev;
  double semigroup = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const DensityMatrix rho = oracle::random_state(rng, 1 + n % 8);
    const double t1 = time(rng);
    const double t2 = time(rng);
    const DensityMatrix a = free_propagate(rho, sys, t1);
    dev.add(a);
    dev.add(free_propagate_averaged(rho, disordered, t1));
    dev.add(dd.apply(rho));
    dev.add(dd3.apply(rho));
    dev.add(shot_programs[n % 2].apply(rho));
    dev.add(readout(rho, words[n % words.size()]));
    dev.add(partial_trace(rho, {n % 3, (n + 1) % 3}));
    if (n % 10 == 0) {
      dev.add(apply_sequence(rho, sys, star.events, star.duration_s));
      dev.add(tomography(rho, {0.01, static_cast<std::uint64_t>(n)}));
    }
    const DensityMatrix whole = free_propagate(rho, sys, t1 + t2);
    const DensityMatrix split = free_propagate(a, sys, t2);
    semigroup = std::max(semigroup, (whole.matrix() - split.matrix()).cwiseAbs().maxCoeff());
  }
  return {dev.ok(1e-10) && semigroup <= 1e-12,
          "trace " + sci(dev.trace) + ", Hermiticity " + sci(dev.herm) + ", negativity " + sci(dev.neg) +
              ", semigroup " + sci(semigroup)};
}

const std::vector<Criterion>& all() {
  static const std::vector<Criterion> list{
      {1, "coherence-order matrix golden", coherence_order_golden},
      {2, "star state golden and concurrence", star_state_golden},
      {3, "modified cycles act as identity in pairs", modified_cycles_identity},
      {4, "single-spin refocusing", refocusing},
      {5, "analytic dephasing", analytic_dephasing},
      {6, "default-config orderings", default_orderings},
      {7, "sequence robustness gate", robustness_gate},
      {8, "tomography fidelity", tomography_fidelity},
      {9, "star entanglement protection", star_protection},
      {10, "channel properties", channel_properties},
  };
  return list;
}

}  // namespace mqc::criteria
