/*
 * Copyright 2026 The aad-evalkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "aad/metrics.hpp"
#include "aad/rng.hpp"

namespace {

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
  aad::Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

void BM_Pearson(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto x = random_series(n, 1);
  auto y = random_series(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(aad::pearson(x, y));
}
BENCHMARK(BM_Pearson)->Arg(640)->Arg(3840)->Arg(38400);

void BM_PccGradient(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto x = random_series(n, 1);
  auto y = random_series(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(aad::pcc_gradient(x, y));
}
BENCHMARK(BM_PccGradient)->Arg(3840);

void BM_WindowedAccuracy(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto pred = random_series(n, 1);
  auto att = random_series(n, 2);
  auto un = random_series(n, 3);
  std::vector<std::span<const double>> competitors{un};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        aad::windowed_accuracy(pred, att, competitors, 64.0, {10.0}));
}
BENCHMARK(BM_WindowedAccuracy)->Arg(3840)->Arg(38400);

}  // namespace
