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

#ifndef AAD_PARTITION_HPP_
#define AAD_PARTITION_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aad/dataset.hpp"

namespace aad {

// Cross-validation strategies. They differ only in the grouping key:
//   LOTO  - each trial is its own key (disjoint trials, stimuli may repeat);
//   LOPEO - the unordered (attended, unattended) stimulus pair is the key,
//           so the test pair is absent from train and val;
//   LOEO  - the attended stimulus alone is the key (for datasets without
//           stable competitor pairings).
enum class CvStrategy { kLoto, kLopeo, kLoeo };

std::string to_string(CvStrategy s);
CvStrategy cv_strategy_from_string(const std::string& s);

struct GroupKey {
  enum class Tag { kTrial, kPair, kAttended };
  Tag tag;
  std::string value;

  auto operator<=>(const GroupKey&) const = default;
};

// Key of one trial under a strategy. LOPEO requires 2-speaker trials and
// throws PairUndefined otherwise (use LOEO for unstable pairings).
GroupKey group_key(CvStrategy strategy, const TrialRecord& trial);

// K disjoint key folds covering every key of the dataset; fold sizes differ
// by at most one key.
struct FoldPlan {
  CvStrategy strategy;
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<GroupKey>> folds;
};

// One concrete (train, val, test) split for a (test fold, val fold) choice.
struct Partition {
  int test_fold = 0;
  int val_fold = 0;
  std::vector<std::string> train_trials;
  std::vector<std::string> val_trials;
  std::vector<std::string> test_trials;
};

// Collects the distinct keys in metadata order, shuffles them with a seeded
// deterministic generator and deals them round-robin into K folds.
// K >= 3 is required: with fewer folds one of train/val/test is empty.
FoldPlan make_fold_plan(const Dataset& d, CvStrategy strategy, int k,
                        std::uint64_t seed);

// All K*(K-1) ordered (test, val) partitions, test-fold major. Trials are
// routed to train/val/test by the fold membership of their key.
std::vector<Partition> enumerate_partitions(const FoldPlan& plan,
                                            const Dataset& d);

struct LeakViolation {
  std::string test_trial;
  std::string leaking_trial;  // train or val trial carrying the leaked key
  std::string leaked_key;
};

struct AuditReport {
  bool passed = true;
  std::vector<LeakViolation> violations;
  // Trial-count skew across the three splits, for transparency.
  std::size_t train_size = 0;
  std::size_t val_size = 0;
  std::size_t test_size = 0;
};

// Checks a partition against the leakage rules of a strategy:
//   LOTO  - train/val/test trial sets pairwise disjoint;
//   LOPEO - additionally, no test trial's stimulus pair occurs in train/val;
//   LOEO  - additionally, no test trial's attended stimulus is attended by
//           any train/val trial.
// Every violation is reported as a (test_trial, leaking_trial, key) triple.
AuditReport audit_partition(const Partition& p, const Dataset& d,
                            CvStrategy strategy);

// folds.json round-trip:
// {strategy, k, seed, folds: [[key,...],...],
//  partitions: [{t, v, train, val, test}, ...]}
struct FoldManifest {
  FoldPlan plan;
  std::vector<Partition> partitions;
};

void write_fold_manifest(const FoldManifest& m, std::ostream& out);
FoldManifest read_fold_manifest(std::istream& in);

}  // namespace aad

#endif  // AAD_PARTITION_HPP_
