// Copyright 2026 The ri-et Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <benchmark/benchmark.h>

#include "riet/dynamics.hpp"
#include "riet/model.hpp"

namespace {

using namespace riet;

ModelParams params(int n_levels) {
  ModelParams p = preset_params(Preset::WeaklyCoupled);
  p.n_levels = n_levels;
  return p;
}

void BM_ExpmIHerm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  std::normal_distribution<double> n;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
  const Matrix h = 0.5 * (a + a.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(expm_i_herm(h, 0.1));
}
BENCHMARK(BM_ExpmIHerm)->Arg(32)->Arg(64)->Arg(128);

void BM_LindbladRhs(benchmark::State& state) {
  const SystemOperators ops = build_system(params(static_cast<int>(state.range(0))));
  const LindbladGenerator gen(ops);
  LindbladGenerator::RowMatrix rho = build_initial_state(ops).matrix();
  LindbladGenerator::RowMatrix out(rho.rows(), rho.cols());
  for (auto _ : state) {
    gen.apply_hermitian(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_LindbladRhs)->Arg(16)->Arg(32);

void BM_RiStepKraus(benchmark::State& state) {
  const SystemOperators ops = build_system(params(static_cast<int>(state.range(0))));
  const RepeatedInteractionChannel ch(build_ri_unitary(ops, 0.1, false).matrix(),
                                      build_ancilla_state(ops.nbar).matrix());
  Matrix rho = build_initial_state(ops).matrix();
  Matrix scratch, acc;
  for (auto _ : state) {
    ch.apply(rho, scratch, acc);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_RiStepKraus)->Arg(16)->Arg(32);

void BM_RiStepPartialTrace(benchmark::State& state) {
  const SystemOperators ops = build_system(params(static_cast<int>(state.range(0))));
  const Operator u = build_ri_unitary(ops, 0.1, false);
  const DensityMatrix eta = build_ancilla_state(ops.nbar);
  DensityMatrix rho = build_initial_state(ops);
  for (auto _ : state) benchmark::DoNotOptimize(ri_step(rho, u, eta));
}
BENCHMARK(BM_RiStepPartialTrace)->Arg(16)->Arg(32);

void BM_TrotterUnitary(benchmark::State& state) {
  const SystemOperators ops = build_system(params(16));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_trotter_unitary(ops, 0.1, n));
}
BENCHMARK(BM_TrotterUnitary)->Arg(1)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
