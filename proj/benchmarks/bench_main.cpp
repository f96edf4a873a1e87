// Copyright 2026 The qprecision Authors
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

#include <benchmark/benchmark.h>

#include "qprecision/bounds.hpp"
#include "qprecision/experiments.hpp"
#include "qprecision/markov.hpp"
#include "qprecision/trajectories.hpp"

namespace {

using namespace qprecision;

void BM_HermEig(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  RngStream rng(kDefaultSeed, 1, d);
  CMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      a(i, j) = i == j ? Complex(rng.uniform(-1, 1)) : Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
      a(j, i) = std::conj(a(i, j));
    }
  for (auto _ : state) benchmark::DoNotOptimize(herm_eig(a));
}
BENCHMARK(BM_HermEig)->Arg(4)->Arg(10)->Arg(16);

void BM_Enumerate(benchmark::State& state) {
  RandomModelParams p;
  p.d_E_min = p.d_E_max = static_cast<std::size_t>(state.range(0));
  p.N = static_cast<int>(state.range(1));
  RngStream rng(kDefaultSeed, rng_tag::kModel, 0);
  const ModelSpec s = sample_model(rng, p);
  const KrausSet k = forward_kraus(s);
  const DensityMatrix rho = stationary_state(k);
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_stats(enumerate(k, rho, s.N, Mode::stationary)));
}
BENCHMARK(BM_Enumerate)->Args({5, 1})->Args({3, 2})->Args({4, 2});

void BM_FBound(benchmark::State& state) {
  double x = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_bound(x));
    x = x < 20 ? x * 1.01 : 1e-3;
  }
}
BENCHMARK(BM_FBound);

void BM_MarkovSigmaStar(benchmark::State& state) {
  const LindbladSpec s = bundled_coherent_qutrit();
  const DensityMatrix ss = lindblad_stationary_state(s);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(markov_sigma_star(s, ss, 0.5, steps));
}
BENCHMARK(BM_MarkovSigmaStar)->Arg(4)->Arg(8);

void BM_TurScatter(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.n_models = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_tur_scatter(cfg));
}
BENCHMARK(BM_TurScatter)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
