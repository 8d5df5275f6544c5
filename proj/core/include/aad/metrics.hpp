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

#ifndef AAD_METRICS_HPP_
#define AAD_METRICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace aad {

// Pearson correlation coefficient of two equal-length series (length >= 2,
// neither constant). Symmetric, in [-1, 1], invariant to positive-affine
// transforms of either argument.
double pearson(std::span<const double> x, std::span<const double> y);

// Negative PCC training loss: L = -rho(pred, att).
double pcc_loss(std::span<const double> pred, std::span<const double> att);

// Contrastive PCC loss:
// L = -rho(pred, att) + mean_k rho(pred, unatt_k).
double contrastive_pcc_loss(std::span<const double> pred,
                            std::span<const double> att,
                            const std::vector<std::span<const double>>& unatt);

// Analytic gradient of rho(pred, target) with respect to each pred sample.
// Sums to zero (shift invariance) and is orthogonal to centered pred
// (scale invariance).
std::vector<double> pcc_gradient(std::span<const double> pred,
                                 std::span<const double> target);

// Non-overlapping decision windows of a fixed duration; the trailing partial
// window is discarded.
struct EvalWindowing {
  double window_seconds = 10.0;
};

struct WindowedScore {
  double acc = 0.0;    // fraction of windows where pred matches att best
  double rho_a = 0.0;  // mean attended-window correlation
  double rho_u = 0.0;  // mean over all competitors and windows
  std::size_t windows_used = 0;
  std::size_t windows_skipped = 0;  // constant windows, skipped with warning
  // Raw per-window sums, so scores can be pooled across trials.
  double sum_correct = 0.0;
  double sum_rho_a = 0.0;
  double sum_rho_u = 0.0;
  std::size_t competitor_terms = 0;
};

// Windowed decoding accuracy: a window is correct iff
// rho(pred, att) > rho(pred, unatt_k) for EVERY competitor k (strict; ties
// count as incorrect). Chance level is 1/N_speaker.
WindowedScore windowed_accuracy(std::span<const double> pred,
                                std::span<const double> att,
                                const std::vector<std::span<const double>>& unatt,
                                double sample_rate_hz, const EvalWindowing& w);

// Pools raw window counts from several trials into one score.
WindowedScore pool_scores(const std::vector<WindowedScore>& parts);

}  // namespace aad

#endif  // AAD_METRICS_HPP_
