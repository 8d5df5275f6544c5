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

#include "aad/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "aad/errors.hpp"
#include "aad/metrics.hpp"

namespace aad {
namespace {

// [t_begin, t_end): samples where every lagged tap stays inside the trial.
std::pair<std::size_t, std::size_t> valid_range(const LagWindow& lags,
                                                std::size_t n) {
  long begin = std::max(0L, static_cast<long>(-lags.min_lag));
  long end = static_cast<long>(n) - std::max(0, lags.max_lag);
  if (end <= begin) throw TooShort("trial shorter than the lag window");
  return {static_cast<std::size_t>(begin), static_cast<std::size_t>(end)};
}

// Lagged design matrix of one trial (valid rows only), feature index
// f = lag_index * channels + channel.
Eigen::MatrixXd design_matrix(const SignalSeries& eeg, const LagWindow& lags) {
  auto [t0, t1] = valid_range(lags, eeg.samples());
  auto rows = static_cast<Eigen::Index>(t1 - t0);
  auto n_lags = static_cast<Eigen::Index>(lags.count());
  auto n_ch = static_cast<Eigen::Index>(eeg.channels);
  Eigen::MatrixXd x(rows, n_lags * n_ch);
  for (Eigen::Index li = 0; li < n_lags; ++li) {
    long tau = lags.min_lag + li;
    for (Eigen::Index c = 0; c < n_ch; ++c) {
      const double* ch = eeg.channel(static_cast<std::size_t>(c));
      for (Eigen::Index r = 0; r < rows; ++r)
        x(r, li * n_ch + c) = ch[static_cast<long>(t0) + r + tau];
    }
  }
  return x;
}

double mean_validation_rho(const LinearDecoder& dec,
                           const std::vector<DecoderExample>& val) {
  double sum = 0.0;
  for (const auto& ex : val) {
    Reconstruction rec = reconstruct(dec, ex.eeg);
    std::span<const double> env(ex.attended.data() + rec.valid_begin,
                                rec.valid_end - rec.valid_begin);
    sum += pearson(rec.valid(), env);
  }
  return sum / static_cast<double>(val.size());
}

}  // namespace

LagWindow default_lag_window(double sample_rate_hz) {
  return {0, static_cast<int>(std::lround(0.25 * sample_rate_hz))};
}

Reconstruction reconstruct(const LinearDecoder& dec, const SignalSeries& eeg) {
  if (static_cast<int>(eeg.channels) != dec.channels())
    throw ChannelMismatch("decoder expects " + std::to_string(dec.channels()) +
                          " channels, got " + std::to_string(eeg.channels));

  auto [t0, t1] = valid_range(dec.lags, eeg.samples());
  Reconstruction rec;
  rec.samples.assign(eeg.samples(), 0.0);
  rec.valid_begin = t0;
  rec.valid_end = t1;

  int n_lags = dec.lags.count();
  for (std::size_t t = t0; t < t1; ++t) {
    double y = dec.bias;
    for (int li = 0; li < n_lags; ++li) {
      std::size_t src = t + static_cast<std::size_t>(
                                static_cast<long>(dec.lags.min_lag) + li);
      for (int c = 0; c < dec.channels(); ++c)
        y += dec.weights(li, c) * eeg.at(static_cast<std::size_t>(c), src);
    }
    rec.samples[t] = y;
  }
  return rec;
}

LinearDecoder fit_ridge(const std::vector<DecoderExample>& train,
                        const std::vector<DecoderExample>& val,
                        const RidgeOptions& opts) {
  if (train.empty()) throw InconsistentShapes("no training examples");
  if (opts.lambda_grid.empty()) throw InvalidConfig("empty lambda grid");

  std::size_t channels = train.front().eeg.channels;
  double fs = train.front().eeg.sample_rate_hz;
  auto dim = static_cast<Eigen::Index>(opts.lags.count()) *
             static_cast<Eigen::Index>(channels);

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd x_sum = Eigen::VectorXd::Zero(dim);
  double y_sum = 0.0;
  double rows_total = 0.0;

  for (const auto& ex : train) {
    if (ex.eeg.channels != channels || ex.eeg.sample_rate_hz != fs)
      throw InconsistentShapes("training trials disagree on channel count or "
                               "sample rate");
    if (ex.attended.size() != ex.eeg.samples())
      throw InconsistentShapes("attended envelope length differs from EEG");
    Eigen::MatrixXd x = design_matrix(ex.eeg, opts.lags);
    auto [t0, t1] = valid_range(opts.lags, ex.eeg.samples());
    (void)t1;
    Eigen::Map<const Eigen::VectorXd> y(ex.attended.data() + t0, x.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    xty.noalias() += x.transpose() * y;
    x_sum.noalias() += x.colwise().sum().transpose();
    y_sum += y.sum();
    rows_total += static_cast<double>(x.rows());
  }
  gram = gram.selfadjointView<Eigen::Lower>();

  // Centered normal equations; bias recovered from the means.
  Eigen::VectorXd x_mean = x_sum / rows_total;
  double y_mean = y_sum / rows_total;
  Eigen::MatrixXd a = gram - rows_total * x_mean * x_mean.transpose();
  Eigen::VectorXd b = xty - rows_total * y_mean * x_mean;

  LinearDecoder best;
  double best_rho = -std::numeric_limits<double>::infinity();
  for (std::size_t li = 0; li < opts.lambda_grid.size(); ++li) {
    double lambda = opts.lambda_grid[li];
    Eigen::MatrixXd reg =
        a + lambda * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd w;
    if (lambda <= 0.0) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(reg);
      if (!lu.isInvertible())
        throw SingularSystem(
            "design is rank-deficient at lambda=0; use a positive lambda");
      w = lu.solve(b);
    } else {
      w = reg.ldlt().solve(b);
    }
    if (!w.allFinite())
      throw SingularSystem("non-finite ridge solution at lambda=" +
                           std::to_string(lambda));

    LinearDecoder dec;
    dec.lags = opts.lags;
    dec.sample_rate_hz = fs;
    dec.weights = Eigen::Map<const Eigen::MatrixXd>(
                      w.data(), static_cast<Eigen::Index>(channels),
                      static_cast<Eigen::Index>(opts.lags.count()))
                      .transpose();
    dec.bias = y_mean - x_mean.dot(w);

    double rho = val.empty() ? -static_cast<double>(li)
                             : mean_validation_rho(dec, val);
    if (rho > best_rho) {
      best_rho = rho;
      best = std::move(dec);
    }
  }
  return best;
}

}  // namespace aad
