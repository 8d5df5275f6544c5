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

#ifndef AAD_DECODER_HPP_
#define AAD_DECODER_HPP_

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "aad/signal.hpp"

namespace aad {

// EEG lags (in samples) fed to the backward model: the decoder sees
// eeg_c(t + tau) for tau in [min_lag, max_lag].
struct LagWindow {
  int min_lag = 0;
  int max_lag = 0;

  int count() const { return max_lag - min_lag + 1; }
};

// Default 0-250 ms (inclusive) at the given rate.
LagWindow default_lag_window(double sample_rate_hz);

// Time-lagged linear stimulus-reconstruction decoder:
// y(t) = sum_c sum_tau w(tau, c) * eeg_c(t + tau) + bias.
struct LinearDecoder {
  Eigen::MatrixXd weights;  // lag count x channel count
  double bias = 0.0;
  LagWindow lags;
  double sample_rate_hz = 0.0;

  int channels() const { return static_cast<int>(weights.cols()); }
};

// One training example: an EEG trial with its attended envelope and the
// competing envelopes (competitors are used by the contrastive loss only).
struct DecoderExample {
  SignalSeries eeg;
  std::vector<double> attended;
  std::vector<std::vector<double>> competitors;
};

// Reconstruction over the valid sample range; the output has the input's
// length with zero-padded edges, [valid_begin, valid_end) marks the samples
// actually computed.
struct Reconstruction {
  std::vector<double> samples;
  std::size_t valid_begin = 0;
  std::size_t valid_end = 0;

  std::span<const double> valid() const {
    return {samples.data() + valid_begin, valid_end - valid_begin};
  }
};

Reconstruction reconstruct(const LinearDecoder& dec, const SignalSeries& eeg);

struct RidgeOptions {
  LagWindow lags;
  std::vector<double> lambda_grid = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
};

// Closed-form ridge fit of the time-lagged reconstruction. Normal equations
// are accumulated over all training trials; lambda is selected by mean
// validation correlation with the attended envelope (ties favor the smaller
// lambda; with no validation trials the smallest lambda is used).
// Deterministic: identical inputs give bit-identical weights.
LinearDecoder fit_ridge(const std::vector<DecoderExample>& train,
                        const std::vector<DecoderExample>& val,
                        const RidgeOptions& opts);

}  // namespace aad

#endif  // AAD_DECODER_HPP_
