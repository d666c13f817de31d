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

#include "cfii/estimate.hpp"

namespace {

const cfii::NoisyFringeParams kParams = cfii::NoisyFringeParams::make(0.0, 0.25, 0.02);

void BM_SampleBinary(benchmark::State& state) {
  const cfii::NoisyFringe model(kParams);
  cfii::CounterRng rng(6);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cfii::sample_binary(model, 0.7, n, rng).n());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleBinary)->Arg(1000)->Arg(100000);

void BM_PluginFi(benchmark::State& state) {
  const cfii::NoisyFringe model(kParams);
  const cfii::ContextSample s = cfii::sample_binary(model, 0.7, 100000, 7);
  for (auto _ : state) benchmark::DoNotOptimize(cfii::plugin_fi(s, model).value);
}
BENCHMARK(BM_PluginFi);

void BM_ClassifierFi(benchmark::State& state) {
  const cfii::NoisyFringe model(kParams);
  cfii::CounterRng rng(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cfii::classifier_fi(model, 0.7, {}, rng).value);
  }
}
BENCHMARK(BM_ClassifierFi)->Unit(benchmark::kMillisecond);

void BM_VkDistribution(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(cfii::mc_vk_distribution(kParams, 1.5707963267948966, 4, 1000,
                                                      static_cast<std::size_t>(state.range(0)), 9)
                                 .mean);
  }
}
BENCHMARK(BM_VkDistribution)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
