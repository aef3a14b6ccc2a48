// Copyright 2026 The PAZO Authors.
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

// Serial versus OpenMP kernels on a synthetic logistic problem.

#include <benchmark/benchmark.h>

#include <vector>

#include "pazo/kernels.h"
#include "pazo/problems.h"
#include "pazo/rng.h"

namespace {

struct Fixture {
  pazo::LogisticSplit data;
  pazo::ParamVector x;
  pazo::ParamVector u;
  std::vector<pazo::SampleId> ids;
};

const Fixture& fixture(std::size_t d, std::size_t n) {
  static std::vector<std::pair<std::pair<std::size_t, std::size_t>, Fixture*>>
      cache;
  for (auto& [key, f] : cache) {
    if (key.first == d && key.second == n) return *f;
  }
  pazo::SplitSpec spec;
  spec.n_private = n;
  spec.n_public = 0;
  spec.n_test = 0;
  auto* f = new Fixture{pazo::make_logistic_split(d, spec), {}, {}, {}};
  pazo::RngStream rng(7, "bench");
  f->x = pazo::gaussian_standard(rng, d);
  f->u = pazo::gaussian_standard(rng, d);
  f->ids = f->data.split.private_ids;
  cache.push_back({{d, n}, f});
  return *f;
}

pazo::Exec mode(const benchmark::State& state) {
  return state.range(2) ? pazo::Exec::kParallel : pazo::Exec::kSerial;
}

void BM_ClippedDeltaSum(benchmark::State& state) {
  const Fixture& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pazo::kernels::clipped_delta_sum(
        f.data.problem, f.x.span(), f.u.span(), 1e-2, f.ids, 1.0,
        mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * f.ids.size());
}

void BM_ClippedGradientSum(benchmark::State& state) {
  const Fixture& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pazo::kernels::clipped_gradient_sum(
        f.data.problem, f.x.span(), f.ids, 1.0, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * f.ids.size());
}

void BM_LossSum(benchmark::State& state) {
  const Fixture& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pazo::kernels::loss_sum(f.data.problem, f.x.span(), f.ids,
                                mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * f.ids.size());
}

void args(benchmark::internal::Benchmark* b) {
  b->ArgNames({"d", "n", "parallel"});
  for (long d : {32, 512}) {
    for (long n : {256, 8192}) {
      for (long p : {0, 1}) b->Args({d, n, p});
    }
  }
}

}  // namespace

BENCHMARK(BM_ClippedDeltaSum)->Apply(args);
BENCHMARK(BM_ClippedGradientSum)->Apply(args);
BENCHMARK(BM_LossSum)->Apply(args);

BENCHMARK_MAIN();
