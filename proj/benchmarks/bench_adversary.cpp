// Copyright 2026 The CFII Authors
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

#include "cfii/adversary.hpp"

namespace {

void BM_EvaluateAdversary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  cfii::CounterRng rng(3);
  const cfii::AdversaryParams p = cfii::AdversaryParams::random(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cfii::evaluate_adversary(p).gamma_adv);
}
BENCHMARK(BM_EvaluateAdversary)->Arg(2)->Arg(5)->Arg(16);

void BM_AdversaryGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  cfii::CounterRng rng(4);
  const cfii::AdversaryParams p = cfii::AdversaryParams::random(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cfii::gamma_adv_gradient(p).a(0));
}
BENCHMARK(BM_AdversaryGradient)->Arg(2)->Arg(5)->Arg(16);

void BM_AdamRestart(benchmark::State& state) {
  cfii::AdamOptions opts;
  opts.steps = static_cast<int>(state.range(0));
  cfii::CounterRng rng(5);
  const cfii::AdversaryParams p = cfii::AdversaryParams::random(5, 5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cfii::adam_ascent(p, opts).best_gamma);
}
BENCHMARK(BM_AdamRestart)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
