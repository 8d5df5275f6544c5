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

#ifndef AAD_TRAINER_HPP_
#define AAD_TRAINER_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aad/decoder.hpp"

namespace aad {

enum class LossKind { kPcc, kContrastive };

std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

struct TrainConfig {
  double learning_rate = 5e-4;
  double weight_decay = 5e-4;  // decoupled from the adaptive step
  double plateau_factor = 0.5;
  int plateau_patience = 5;
  int plateau_cooldown = 5;
  int early_stop_patience = 10;
  int max_epochs = 100;
  LossKind loss = LossKind::kPcc;
  std::uint64_t seed = 0;
  std::optional<LagWindow> lags;  // default: 0-250 ms at the trial rate
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

// Reduce-on-plateau: after `patience` epochs without a strict validation
// improvement, signals a reduction, then stays quiet for `cooldown` epochs.
class PlateauScheduler {
 public:
  PlateauScheduler(int patience, int cooldown)
      : patience_(patience), cooldown_(cooldown) {}

  // Call once per epoch; true means reduce the learning rate now.
  bool observe(double val_loss);

 private:
  int patience_;
  int cooldown_;
  double best_ = std::numeric_limits<double>::infinity();
  int bad_epochs_ = 0;
  int cooldown_left_ = 0;
};

// Stops after `patience` consecutive epochs without strict improvement.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience) : patience_(patience) {}

  // Call once per epoch; true means stop after this epoch.
  bool observe(double val_loss);
  bool improved_last() const { return improved_last_; }

 private:
  int patience_;
  double best_ = std::numeric_limits<double>::infinity();
  int bad_epochs_ = 0;
  bool improved_last_ = false;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double learning_rate = 0.0;  // rate used during this epoch
  bool lr_reduced = false;     // reduction triggered at the end of this epoch
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  bool early_stopped = false;
  int best_epoch = 0;
};

// Runs the plateau scheduler and early stopper over a given validation-loss
// sequence, producing the log the real trainer would. Used to verify the
// schedule in isolation.
TrainingLog simulate_schedule(std::span<const double> val_losses,
                              const TrainConfig& cfg);

struct GradientFitResult {
  LinearDecoder decoder;  // best-validation-loss weights
  TrainingLog log;
};

// First-order training of the linear decoder on the PCC or contrastive PCC
// objective: Adam with decoupled weight decay, one whole trial per batch,
// trial order reshuffled each epoch from the config seed. Validation loss
// drives the plateau schedule and early stopping. Throws Diverged when a
// loss turns non-finite.
GradientFitResult fit_gradient_decoder(const std::vector<DecoderExample>& train,
                                       const std::vector<DecoderExample>& val,
                                       const TrainConfig& cfg);

}  // namespace aad

#endif  // AAD_TRAINER_HPP_
