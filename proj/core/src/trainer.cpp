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

#include "aad/trainer.hpp"

#include <cmath>
#include <numeric>

#include "aad/errors.hpp"
#include "aad/metrics.hpp"
#include "aad/rng.hpp"

namespace aad {
namespace {

std::pair<std::size_t, std::size_t> valid_range(const LagWindow& lags,
                                                std::size_t n) {
  long begin = std::max(0L, static_cast<long>(-lags.min_lag));
  long end = static_cast<long>(n) - std::max(0, lags.max_lag);
  if (end <= begin) throw TooShort("trial shorter than the lag window");
  return {static_cast<std::size_t>(begin), static_cast<std::size_t>(end)};
}

// Per-trial cache: lagged design matrix and valid-range target slices.
struct PreparedTrial {
  Eigen::MatrixXd x;
  Eigen::VectorXd att;
  std::vector<Eigen::VectorXd> unatt;
};

PreparedTrial prepare(const DecoderExample& ex, const LagWindow& lags) {
  auto [t0, t1] = valid_range(lags, ex.eeg.samples());
  auto rows = static_cast<Eigen::Index>(t1 - t0);
  auto n_lags = static_cast<Eigen::Index>(lags.count());
  auto n_ch = static_cast<Eigen::Index>(ex.eeg.channels);
  if (ex.attended.size() != ex.eeg.samples())
    throw InconsistentShapes("attended envelope length differs from EEG");

  PreparedTrial p;
  p.x.resize(rows, n_lags * n_ch);
  for (Eigen::Index li = 0; li < n_lags; ++li) {
    long tau = lags.min_lag + li;
    for (Eigen::Index c = 0; c < n_ch; ++c) {
      const double* ch = ex.eeg.channel(static_cast<std::size_t>(c));
      for (Eigen::Index r = 0; r < rows; ++r)
        p.x(r, li * n_ch + c) = ch[static_cast<long>(t0) + r + tau];
    }
  }
  p.att = Eigen::Map<const Eigen::VectorXd>(ex.attended.data() + t0, rows);
  for (const auto& u : ex.competitors) {
    if (u.size() != ex.eeg.samples())
      throw InconsistentShapes("competitor envelope length differs from EEG");
    p.unatt.emplace_back(
        Eigen::Map<const Eigen::VectorXd>(u.data() + t0, rows));
  }
  return p;
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Loss and d loss / d pred for one trial.
double trial_loss_grad(const Eigen::VectorXd& pred, const PreparedTrial& t,
                       LossKind loss, Eigen::VectorXd* grad_out) {
  auto pred_span = as_span(pred);
  std::vector<double> g = pcc_gradient(pred_span, as_span(t.att));
  double l = -pearson(pred_span, as_span(t.att));
  Eigen::VectorXd grad =
      -Eigen::Map<const Eigen::VectorXd>(g.data(),
                                         static_cast<Eigen::Index>(g.size()));
  if (loss == LossKind::kContrastive) {
    if (t.unatt.empty())
      throw InconsistentShapes("contrastive loss needs competitor envelopes");
    double inv_k = 1.0 / static_cast<double>(t.unatt.size());
    for (const auto& u : t.unatt) {
      l += inv_k * pearson(pred_span, as_span(u));
      std::vector<double> gu = pcc_gradient(pred_span, as_span(u));
      grad += inv_k * Eigen::Map<const Eigen::VectorXd>(
                          gu.data(), static_cast<Eigen::Index>(gu.size()));
    }
  }
  if (grad_out) *grad_out = std::move(grad);
  return l;
}

}  // namespace

std::string to_string(LossKind k) {
  return k == LossKind::kPcc ? "pcc" : "contrastive";
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "pcc") return LossKind::kPcc;
  if (s == "contrastive") return LossKind::kContrastive;
  throw InvalidConfig("unknown loss '" + s + "'");
}

bool PlateauScheduler::observe(double val_loss) {
  if (val_loss < best_) {
    best_ = val_loss;
    bad_epochs_ = 0;
    if (cooldown_left_ > 0) --cooldown_left_;
    return false;
  }
  if (cooldown_left_ > 0) {
    --cooldown_left_;
    return false;
  }
  if (++bad_epochs_ >= patience_) {
    bad_epochs_ = 0;
    cooldown_left_ = cooldown_;
    return true;
  }
  return false;
}

bool EarlyStopper::observe(double val_loss) {
  improved_last_ = val_loss < best_;
  if (improved_last_) {
    best_ = val_loss;
    bad_epochs_ = 0;
    return false;
  }
  return ++bad_epochs_ >= patience_;
}

TrainingLog simulate_schedule(std::span<const double> val_losses,
                              const TrainConfig& cfg) {
  PlateauScheduler scheduler(cfg.plateau_patience, cfg.plateau_cooldown);
  EarlyStopper stopper(cfg.early_stop_patience);
  TrainingLog log;
  double lr = cfg.learning_rate;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < val_losses.size(); ++i) {
    double v = val_losses[i];
    EpochRecord rec;
    rec.epoch = static_cast<int>(i) + 1;
    rec.train_loss = v;
    rec.val_loss = v;
    rec.learning_rate = lr;
    rec.lr_reduced = scheduler.observe(v);
    if (rec.lr_reduced) lr *= cfg.plateau_factor;
    if (v < best) {
      best = v;
      log.best_epoch = rec.epoch;
    }
    bool stop = stopper.observe(v);
    log.epochs.push_back(rec);
    if (stop) {
      log.early_stopped = true;
      break;
    }
  }
  return log;
}

GradientFitResult fit_gradient_decoder(const std::vector<DecoderExample>& train,
                                       const std::vector<DecoderExample>& val,
                                       const TrainConfig& cfg) {
  if (train.empty()) throw InconsistentShapes("no training examples");
  std::size_t channels = train.front().eeg.channels;
  double fs = train.front().eeg.sample_rate_hz;
  for (const auto& ex : train)
    if (ex.eeg.channels != channels || ex.eeg.sample_rate_hz != fs)
      throw InconsistentShapes("training trials disagree on channel count or "
                               "sample rate");

  LagWindow lags = cfg.lags.value_or(default_lag_window(fs));

  std::vector<PreparedTrial> prepared;
  prepared.reserve(train.size());
  for (const auto& ex : train) prepared.push_back(prepare(ex, lags));
  std::vector<PreparedTrial> val_prepared;
  val_prepared.reserve(val.size());
  for (const auto& ex : val) val_prepared.push_back(prepare(ex, lags));

  auto dim = static_cast<Eigen::Index>(lags.count()) *
             static_cast<Eigen::Index>(channels);

  Rng rng(derive_seed(cfg.seed, 0));
  Eigen::VectorXd w(dim);
  for (Eigen::Index i = 0; i < dim; ++i) w[i] = 0.01 * rng.normal();
  double bias = 0.0;

  // Adam state (weights only; bias has zero gradient under correlation
  // losses but is updated for completeness).
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd v2 = Eigen::VectorXd::Zero(dim);
  double mb = 0.0, vb = 0.0;
  long step = 0;

  PlateauScheduler scheduler(cfg.plateau_patience, cfg.plateau_cooldown);
  EarlyStopper stopper(cfg.early_stop_patience);
  TrainingLog log;
  double lr = cfg.learning_rate;
  double best_val = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_w = w;
  double best_bias = bias;

  std::vector<std::size_t> order(prepared.size());
  std::iota(order.begin(), order.end(), 0);

  Rng shuffle_rng(derive_seed(cfg.seed, 1));
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double train_loss_sum = 0.0;
    for (std::size_t idx : order) {
      const PreparedTrial& t = prepared[idx];
      Eigen::VectorXd pred = t.x * w;
      pred.array() += bias;
      Eigen::VectorXd grad_pred;
      double l = trial_loss_grad(pred, t, cfg.loss, &grad_pred);
      if (!std::isfinite(l))
        throw Diverged("non-finite training loss at epoch " +
                       std::to_string(epoch));
      train_loss_sum += l;

      Eigen::VectorXd grad_w = t.x.transpose() * grad_pred;
      double grad_b = grad_pred.sum();

      ++step;
      double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
      double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
      m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * grad_w;
      v2 = cfg.adam_beta2 * v2.array().matrix() +
           (1.0 - cfg.adam_beta2) * grad_w.cwiseProduct(grad_w);
      w -= lr * cfg.weight_decay * w;  // decoupled decay
      w.array() -= lr * (m.array() / bc1) /
                   ((v2.array() / bc2).sqrt() + cfg.adam_eps);
      mb = cfg.adam_beta1 * mb + (1.0 - cfg.adam_beta1) * grad_b;
      vb = cfg.adam_beta2 * vb + (1.0 - cfg.adam_beta2) * grad_b * grad_b;
      bias -= lr * (mb / bc1) / (std::sqrt(vb / bc2) + cfg.adam_eps);
    }

    double val_loss_sum = 0.0;
    for (const auto& t : val_prepared) {
      Eigen::VectorXd pred = t.x * w;
      pred.array() += bias;
      val_loss_sum += trial_loss_grad(pred, t, cfg.loss, nullptr);
    }
    double train_loss = train_loss_sum / static_cast<double>(prepared.size());
    double val_loss = val_prepared.empty()
                          ? train_loss
                          : val_loss_sum / static_cast<double>(val_prepared.size());
    if (!std::isfinite(val_loss))
      throw Diverged("non-finite validation loss at epoch " +
                     std::to_string(epoch));

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = train_loss;
    rec.val_loss = val_loss;
    rec.learning_rate = lr;
    rec.lr_reduced = scheduler.observe(val_loss);
    if (rec.lr_reduced) lr *= cfg.plateau_factor;
    if (val_loss < best_val) {
      best_val = val_loss;
      best_w = w;
      best_bias = bias;
      log.best_epoch = epoch;
    }
    bool stop = stopper.observe(val_loss);
    log.epochs.push_back(rec);
    if (stop) {
      log.early_stopped = true;
      break;
    }
  }

  GradientFitResult res;
  res.decoder.lags = lags;
  res.decoder.sample_rate_hz = fs;
  res.decoder.bias = best_bias;
  res.decoder.weights =
      Eigen::Map<const Eigen::MatrixXd>(best_w.data(),
                                        static_cast<Eigen::Index>(channels),
                                        static_cast<Eigen::Index>(lags.count()))
          .transpose();
  res.log = std::move(log);
  return res;
}

}  // namespace aad
