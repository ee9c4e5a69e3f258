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

#include <benchmark/benchmark.h>

#include <random>

#include "mqc/circuits.hpp"
#include "mqc/ddseq.hpp"
#include "mqc/qmat.hpp"
#include "mqc/run_config.hpp"
#include "mqc/runner.hpp"
#include "mqc/spinsys.hpp"

namespace {

using namespace mqc;

const RunConfig& defaults() {
  static const RunConfig cfg = load_run_config("", {});
  return cfg;
}

void BM_FreePropagate(benchmark::State& st) {
  const SpinSystem& sys = defaults().system;
  const DensityMatrix rho = prepare("psi3");
  for (auto _ : st) benchmark::DoNotOptimize(free_propagate(rho, sys, 0.35));
}
BENCHMARK(BM_FreePropagate);

void BM_FreePropagateAveraged(benchmark::State& st) {
  const SpinSystem& sys = defaults().system;
  const DensityMatrix rho = prepare("psi3");
  for (auto _ : st) benchmark::DoNotOptimize(free_propagate_averaged(rho, sys, 0.35));
}
BENCHMARK(BM_FreePropagateAveraged);

void BM_CompiledCycle(benchmark::State& st) {
  const SpinSystem& sys = defaults().system;
  const DDCycle cycle = generate(Family::KDD20, 0.5e-3, st.range(0) ? 20e-6 : 0.0, {0, 1, 2});
  const CompiledProgram prog(sys, unit_program(cycle));
  Mat8 rho = prepare("psi3").matrix();
  for (auto _ : st) {
    prog.apply_in_place(rho);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_CompiledCycle)->Arg(0)->Arg(1);

void BM_Concurrence(benchmark::State& st) {
  const DensityMatrix ac = partial_trace(prepare("star"), {0, 2});
  for (auto _ : st) benchmark::DoNotOptimize(concurrence(ac));
}
BENCHMARK(BM_Concurrence);

void BM_Tomography(benchmark::State& st) {
  const DensityMatrix rho = prepare("psi0a");
  TomographyOptions opts;
  opts.noise_sigma = 0.01;
  for (auto _ : st) benchmark::DoNotOptimize(tomography(rho, opts));
}
BENCHMARK(BM_Tomography)->Unit(benchmark::kMicrosecond);

void BM_DecayCurve(benchmark::State& st) {
  const RunConfig& cfg = defaults();
  const StateSpec& state = StateCatalog::builtin().get("psi2a");
  const auto protocols = protocols_for(cfg, state);
  const Protocol& p = protocols.back();
  const auto times = protocol_grid(p, cfg.t_end_s, cfg.points);
  for (auto _ : st) benchmark::DoNotOptimize(run_decay(state, p, cfg.system, times));
}
BENCHMARK(BM_DecayCurve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
