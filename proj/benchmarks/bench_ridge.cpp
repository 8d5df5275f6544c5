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

#include "aad/decoder.hpp"
#include "aad/synth.hpp"

namespace {

std::vector<aad::DecoderExample> make_examples(int n_trials,
                                               const aad::ScenarioConfig& cfg) {
  auto length = static_cast<std::size_t>(cfg.trial_seconds * cfg.sample_rate_hz);
  std::vector<aad::DecoderExample> out;
  for (int i = 0; i < n_trials; ++i) {
    auto att = aad::generate_envelope(length, cfg.sample_rate_hz,
                                      static_cast<std::uint64_t>(2 * i));
    auto un = aad::generate_envelope(length, cfg.sample_rate_hz,
                                     static_cast<std::uint64_t>(2 * i + 1));
    aad::DecoderExample ex;
    ex.eeg = aad::synthesize_trial_eeg(att, {un}, cfg,
                                       static_cast<std::uint64_t>(1000 + i));
    ex.attended = std::move(att);
    ex.competitors = {std::move(un)};
    out.push_back(std::move(ex));
  }
  return out;
}

void BM_FitRidge(benchmark::State& state) {
  aad::ScenarioConfig cfg;
  cfg.trial_seconds = 30.0;
  auto train = make_examples(static_cast<int>(state.range(0)), cfg);
  auto val = make_examples(2, cfg);
  aad::RidgeOptions opts;
  opts.lags = aad::default_lag_window(cfg.sample_rate_hz);
  for (auto _ : state)
    benchmark::DoNotOptimize(aad::fit_ridge(train, val, opts));
}
BENCHMARK(BM_FitRidge)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
