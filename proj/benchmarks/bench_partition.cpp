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

#include "aad/balance.hpp"
#include "aad/partition.hpp"

namespace {

aad::Dataset make_dataset(int n_pairs, int repeats) {
  aad::Dataset d;
  d.name = "bench";
  for (int p = 0; p < n_pairs; ++p) {
    aad::StimulusId a("s" + std::to_string(2 * p));
    aad::StimulusId b("s" + std::to_string(2 * p + 1));
    for (int r = 0; r < repeats; ++r) {
      aad::TrialRecord t;
      t.trial_id = "t" + std::to_string(p) + "_" + std::to_string(r);
      t.subject_id = "sub";
      t.attended = r % 2 ? b : a;
      t.unattended = {r % 2 ? a : b};
      d.trials.push_back(std::move(t));
    }
  }
  return d;
}

void BM_MakeFoldPlanAndEnumerate(benchmark::State& state) {
  auto d = make_dataset(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) {
    auto plan = aad::make_fold_plan(d, aad::CvStrategy::kLopeo, 5, 42);
    benchmark::DoNotOptimize(aad::enumerate_partitions(plan, d));
  }
}
BENCHMARK(BM_MakeFoldPlanAndEnumerate)->Arg(16)->Arg(128);

void BM_AuditPartitions(benchmark::State& state) {
  auto d = make_dataset(static_cast<int>(state.range(0)), 8);
  auto plan = aad::make_fold_plan(d, aad::CvStrategy::kLopeo, 5, 42);
  auto parts = aad::enumerate_partitions(plan, d);
  for (auto _ : state)
    for (const auto& p : parts)
      benchmark::DoNotOptimize(aad::audit_partition(p, d, aad::CvStrategy::kLopeo));
}
BENCHMARK(BM_AuditPartitions)->Arg(16)->Arg(64);

void BM_BalanceIndex(benchmark::State& state) {
  auto d = make_dataset(static_cast<int>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(aad::balance_index(d));
}
BENCHMARK(BM_BalanceIndex)->Arg(64)->Arg(512);

}  // namespace
