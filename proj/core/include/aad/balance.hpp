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

#ifndef AAD_BALANCE_HPP_
#define AAD_BALANCE_HPP_

#include <map>

#include "aad/dataset.hpp"

namespace aad {

// Per-stimulus attended / unattended occurrence counts. Multi-speaker rule:
// every trial adds one attended count for its attended stimulus and one
// unattended count for EACH competitor.
struct RoleCounts {
  struct Counts {
    int n_att = 0;
    int n_unatt = 0;
  };
  std::map<StimulusId, Counts> per_stimulus;

  int n_audio() const { return static_cast<int>(per_stimulus.size()); }
};

// Balance index in [0, 1]: mean over stimuli of
// |n_att - n_unatt| / (n_att + n_unatt). 0 = every stimulus serves both
// roles equally often; 1 = every stimulus is locked to one role.
struct BalanceReport {
  RoleCounts counts;
  double bi = 0.0;
  std::map<StimulusId, double> per_stimulus_imbalance;
};

enum class SubsetTarget { kBalanced, kExclusive };

RoleCounts role_counts(const Dataset& d);
BalanceReport balance_index(const Dataset& d);

// Balance index per subject (trials grouped by subject_id).
std::map<std::string, BalanceReport> balance_index_per_subject(const Dataset& d);

struct SubsetResult {
  Dataset subset;
  BalanceReport report;
};

// Constructs a sub-dataset with extreme balance.
//
// kExclusive: greedily drops the trial whose removal most reduces the role
// conflict (sum over stimuli of min(n_att, n_unatt)), ties broken by
// metadata order, until no stimulus occurs in both roles. Resulting BI = 1.
//
// kBalanced: considers 2-speaker trials only (a pure multi-speaker dataset
// cannot equalize roles: totals differ by construction); for each canonical
// stimulus pair, keeps the first min(n, m) trials of each attended
// direction, so every retained stimulus has equal role counts. BI = 0.
//
// Throws NoFeasibleSubset when no non-empty subset attains the target.
SubsetResult extreme_subset(const Dataset& d, SubsetTarget target);

}  // namespace aad

#endif  // AAD_BALANCE_HPP_
