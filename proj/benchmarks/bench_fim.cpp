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

#include <random>

#include <benchmark/benchmark.h>

#include "cfii/fim.hpp"

namespace {

cfii::FisherMatrix random_spd(int d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = normal(gen);
  return cfii::FisherMatrix(a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d));
}

void BM_EffectiveFi(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const cfii::FisherMatrix f = random_spd(d, 1);
  const cfii::Direction u = cfii::Direction::all_ones(d);
  for (auto _ : state) benchmark::DoNotOptimize(cfii::effective_fi(f, u));
}
BENCHMARK(BM_EffectiveFi)->Arg(2)->Arg(4)->Arg(16)->Arg(64);

void BM_PseudoInverse(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const cfii::FisherMatrix f = random_spd(d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(cfii::pseudo_inverse(f));
}
BENCHMARK(BM_PseudoInverse)->Arg(4)->Arg(16)->Arg(64);

void BM_EquicorrelatedClosedForm(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cfii::equicorrelated_effective_fi(1.3, 0.4, k));
}
BENCHMARK(BM_EquicorrelatedClosedForm)->Arg(12)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
