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

#include "aad/balance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "aad/errors.hpp"

namespace aad {
namespace {

RoleCounts role_counts_of(const std::vector<TrialRecord>& trials) {
  RoleCounts rc;
  for (const auto& t : trials) {
    rc.per_stimulus[t.attended].n_att += 1;
    for (const auto& u : t.unattended) rc.per_stimulus[u].n_unatt += 1;
  }
  return rc;
}

BalanceReport report_of(const std::vector<TrialRecord>& trials) {
  BalanceReport r;
  r.counts = role_counts_of(trials);
  double sum = 0.0;
  for (const auto& [id, c] : r.counts.per_stimulus) {
    double imb = std::abs(c.n_att - c.n_unatt) /
                 static_cast<double>(c.n_att + c.n_unatt);
    r.per_stimulus_imbalance[id] = imb;
    sum += imb;
  }
  r.bi = sum / r.counts.n_audio();
  return r;
}

// Number of role co-occurrences still to resolve: sum over stimuli of
// min(n_att, n_unatt). Zero iff every stimulus is exclusive to one role.
long conflict(const RoleCounts& rc) {
  long c = 0;
  for (const auto& [id, n] : rc.per_stimulus) c += std::min(n.n_att, n.n_unatt);
  return c;
}

}  // namespace

RoleCounts role_counts(const Dataset& d) {
  if (d.trials.empty()) throw EmptyDataset("role_counts: dataset is empty");
  return role_counts_of(d.trials);
}

BalanceReport balance_index(const Dataset& d) {
  if (d.trials.empty()) throw EmptyDataset("balance_index: dataset is empty");
  return report_of(d.trials);
}

std::map<std::string, BalanceReport> balance_index_per_subject(const Dataset& d) {
  if (d.trials.empty())
    throw EmptyDataset("balance_index_per_subject: dataset is empty");
  std::map<std::string, std::vector<TrialRecord>> by_subject;
  for (const auto& t : d.trials) by_subject[t.subject_id].push_back(t);
  std::map<std::string, BalanceReport> out;
  for (const auto& [subj, trials] : by_subject) out[subj] = report_of(trials);
  return out;
}

SubsetResult extreme_subset(const Dataset& d, SubsetTarget target) {
  if (d.trials.empty()) throw EmptyDataset("extreme_subset: dataset is empty");

  std::vector<TrialRecord> kept;

  if (target == SubsetTarget::kExclusive) {
    kept = d.trials;
    while (!kept.empty() && conflict(role_counts_of(kept)) > 0) {
      long best = std::numeric_limits<long>::max();
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < kept.size(); ++i) {
        std::vector<TrialRecord> trial_removed = kept;
        trial_removed.erase(trial_removed.begin() + static_cast<long>(i));
        long c = trial_removed.empty() ? 0 : conflict(role_counts_of(trial_removed));
        if (c < best) {
          best = c;
          best_i = i;
        }
      }
      kept.erase(kept.begin() + static_cast<long>(best_i));
    }
    if (kept.empty())
      throw NoFeasibleSubset("no non-empty exclusive-role subset exists");
  } else {
    // Balanced: per canonical pair of 2-speaker trials, keep equally many
    // trials of each attended direction, in metadata order.
    std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
        by_pair;
    for (std::size_t i = 0; i < d.trials.size(); ++i) {
      const auto& t = d.trials[i];
      if (t.unattended.size() != 1) continue;
      auto p = canonical_pair(t.attended, t.unattended[0]);
      auto& dirs = by_pair[p.encode()];
      (t.attended == p.first ? dirs.first : dirs.second).push_back(i);
    }
    std::vector<std::size_t> keep_idx;
    for (const auto& [pair, dirs] : by_pair) {
      std::size_t n = std::min(dirs.first.size(), dirs.second.size());
      for (std::size_t k = 0; k < n; ++k) {
        keep_idx.push_back(dirs.first[k]);
        keep_idx.push_back(dirs.second[k]);
      }
    }
    if (keep_idx.empty())
      throw NoFeasibleSubset("no non-empty equal-role subset exists");
    std::sort(keep_idx.begin(), keep_idx.end());
    for (std::size_t i : keep_idx) kept.push_back(d.trials[i]);
  }

  SubsetResult res;
  res.subset.name = d.name + (target == SubsetTarget::kExclusive
                                  ? ".exclusive"
                                  : ".balanced");
  res.subset.trials = std::move(kept);
  res.report = report_of(res.subset.trials);
  return res;
}

}  // namespace aad
