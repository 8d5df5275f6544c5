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

#include "aad/memorizing.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aad/errors.hpp"
#include "aad/metrics.hpp"

namespace aad {
namespace {

void standardize(std::span<double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(x.size()));
  if (sd == 0.0) return;
  for (double& v : x) v = (v - mean) / sd;
}

}  // namespace

MemorizingDecoder build_memorizing_decoder(
    LinearDecoder base, const Partition& partition, const Dataset& dataset,
    const std::map<StimulusId, std::vector<double>>& envelopes, double alpha,
    double threshold) {
  if (partition.train_trials.empty())
    throw MissingEnvelope("empty training partition: nothing to store");

  std::map<std::string, const TrialRecord*> by_id;
  for (const auto& t : dataset.trials) by_id[t.trial_id] = &t;

  MemorizingDecoder dec;
  dec.base = std::move(base);
  dec.blend_alpha = alpha;
  dec.match_threshold = threshold;

  for (const auto& id : partition.train_trials) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw UnknownTrial("unknown trial_id '" + id + "'");
    const StimulusId& att = it->second->attended;
    auto env = envelopes.find(att);
    if (env == envelopes.end())
      throw MissingEnvelope("no envelope for attended stimulus '" + att.str() +
                            "' of trial '" + id + "'");
    dec.stored_envelopes[att] = env->second;
  }

  // If the partition is pair-leakage free, memorization must be harmless:
  // no stored key may belong to any test trial's stimulus set.
  AuditReport audit;
  bool pairs_defined = true;
  try {
    audit = audit_partition(partition, dataset, CvStrategy::kLopeo);
  } catch (const PairUndefined&) {
    pairs_defined = false;
  }
  if (pairs_defined && audit.passed) {
    for (const auto& id : partition.test_trials) {
      const TrialRecord& t = *by_id.at(id);
      std::set<StimulusId> stimuli(t.unattended.begin(), t.unattended.end());
      stimuli.insert(t.attended);
      for (const auto& s : stimuli)
        if (dec.stored_envelopes.count(s))
          throw PlanMismatch(
              "pair-leakage-free partition stored test stimulus '" + s.str() +
              "'");
    }
  }
  return dec;
}

namespace {

bool constant(std::span<const double> x) {
  for (double v : x)
    if (v != x[0]) return false;
  return true;
}

}  // namespace

Reconstruction reconstruct_with_memory(const MemorizingDecoder& dec,
                                       const SignalSeries& eeg) {
  Reconstruction rec = reconstruct(dec.base, eeg);
  if (dec.stored_envelopes.empty()) return rec;

  auto win = static_cast<std::size_t>(dec.window_seconds *
                                      dec.base.sample_rate_hz);
  std::span<const double> lin = rec.valid();
  if (win < 2 || lin.size() < win) return rec;

  std::size_t n_windows = lin.size() / win;
  for (std::size_t k = 0; k < n_windows; ++k) {
    std::size_t off = rec.valid_begin + k * win;
    auto lw = lin.subspan(k * win, win);
    if (constant(lw)) continue;

    double best_rho = -2.0;
    const std::vector<double>* best_env = nullptr;
    for (const auto& [id, env] : dec.stored_envelopes) {
      if (env.size() < off + win) continue;
      std::span<const double> ew(env.data() + off, win);
      if (constant(ew)) continue;
      double rho = pearson(lw, ew);
      if (rho > best_rho) {
        best_rho = rho;
        best_env = &env;
      }
    }
    if (!best_env || best_rho <= dec.match_threshold) continue;

    std::vector<double> matched(best_env->data() + off,
                                best_env->data() + off + win);
    std::vector<double> linear(lw.begin(), lw.end());
    standardize(matched);
    standardize(linear);
    for (std::size_t i = 0; i < win; ++i)
      rec.samples[off + i] =
          dec.blend_alpha * matched[i] + (1.0 - dec.blend_alpha) * linear[i];
  }
  return rec;
}

}  // namespace aad
