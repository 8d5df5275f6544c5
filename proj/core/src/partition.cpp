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

#include "aad/partition.hpp"

#include <map>
#include <set>

#include "aad/errors.hpp"
#include "aad/rng.hpp"
#include "nlohmann/json.hpp"

namespace aad {
namespace {

using json = nlohmann::ordered_json;

GroupKey::Tag tag_of(CvStrategy s) {
  switch (s) {
    case CvStrategy::kLoto:
      return GroupKey::Tag::kTrial;
    case CvStrategy::kLopeo:
      return GroupKey::Tag::kPair;
    case CvStrategy::kLoeo:
      return GroupKey::Tag::kAttended;
  }
  return GroupKey::Tag::kTrial;
}

}  // namespace

std::string to_string(CvStrategy s) {
  switch (s) {
    case CvStrategy::kLoto:
      return "loto";
    case CvStrategy::kLopeo:
      return "lopeo";
    case CvStrategy::kLoeo:
      return "loeo";
  }
  return "?";
}

CvStrategy cv_strategy_from_string(const std::string& s) {
  if (s == "loto") return CvStrategy::kLoto;
  if (s == "lopeo") return CvStrategy::kLopeo;
  if (s == "loeo") return CvStrategy::kLoeo;
  throw InvalidConfig("unknown cross-validation strategy '" + s + "'");
}

GroupKey group_key(CvStrategy strategy, const TrialRecord& trial) {
  switch (strategy) {
    case CvStrategy::kLoto:
      return {GroupKey::Tag::kTrial, trial.trial_id};
    case CvStrategy::kLopeo:
      if (trial.unattended.size() != 1)
        throw PairUndefined("trial '" + trial.trial_id + "' has " +
                            std::to_string(trial.speaker_count()) +
                            " speakers; stimulus pairs are undefined, use "
                            "LOEO instead");
      return {GroupKey::Tag::kPair,
              canonical_pair(trial.attended, trial.unattended[0]).encode()};
    case CvStrategy::kLoeo:
      return {GroupKey::Tag::kAttended, trial.attended.str()};
  }
  throw InvalidConfig("unreachable strategy");
}

FoldPlan make_fold_plan(const Dataset& d, CvStrategy strategy, int k,
                        std::uint64_t seed) {
  if (k < 3)
    throw NeedThreeFolds(
        "K must be at least 3: train, val and test folds must all be "
        "non-empty");

  // Distinct keys in metadata order.
  std::vector<GroupKey> keys;
  std::set<GroupKey> seen;
  for (const auto& t : d.trials) {
    GroupKey key = group_key(strategy, t);
    if (seen.insert(key).second) keys.push_back(std::move(key));
  }
  if (static_cast<int>(keys.size()) < k)
    throw InsufficientKeys("only " + std::to_string(keys.size()) +
                           " distinct keys for K=" + std::to_string(k));

  Rng rng(seed);
  rng.shuffle(keys);

  FoldPlan plan;
  plan.strategy = strategy;
  plan.k = k;
  plan.seed = seed;
  plan.folds.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < keys.size(); ++i)
    plan.folds[i % static_cast<std::size_t>(k)].push_back(std::move(keys[i]));
  return plan;
}

std::vector<Partition> enumerate_partitions(const FoldPlan& plan,
                                            const Dataset& d) {
  std::map<GroupKey, int> fold_of;
  for (int f = 0; f < plan.k; ++f)
    for (const auto& key : plan.folds[static_cast<std::size_t>(f)])
      fold_of[key] = f;

  // Resolve each trial's fold once.
  std::vector<int> trial_fold(d.trials.size());
  for (std::size_t i = 0; i < d.trials.size(); ++i) {
    GroupKey key = group_key(plan.strategy, d.trials[i]);
    auto it = fold_of.find(key);
    if (it == fold_of.end())
      throw PlanMismatch("trial '" + d.trials[i].trial_id + "' has key '" +
                         key.value + "' absent from all folds");
    trial_fold[i] = it->second;
  }

  std::vector<Partition> out;
  out.reserve(static_cast<std::size_t>(plan.k) *
              static_cast<std::size_t>(plan.k - 1));
  for (int t = 0; t < plan.k; ++t) {
    for (int v = 0; v < plan.k; ++v) {
      if (v == t) continue;
      Partition p;
      p.test_fold = t;
      p.val_fold = v;
      for (std::size_t i = 0; i < d.trials.size(); ++i) {
        const auto& id = d.trials[i].trial_id;
        if (trial_fold[i] == t)
          p.test_trials.push_back(id);
        else if (trial_fold[i] == v)
          p.val_trials.push_back(id);
        else
          p.train_trials.push_back(id);
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

AuditReport audit_partition(const Partition& p, const Dataset& d,
                            CvStrategy strategy) {
  std::map<std::string, const TrialRecord*> by_id;
  for (const auto& t : d.trials) by_id[t.trial_id] = &t;
  auto lookup = [&](const std::string& id) -> const TrialRecord& {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw UnknownTrial("unknown trial_id '" + id + "'");
    return *it->second;
  };

  AuditReport r;
  r.train_size = p.train_trials.size();
  r.val_size = p.val_trials.size();
  r.test_size = p.test_trials.size();

  std::set<std::string> train(p.train_trials.begin(), p.train_trials.end());
  std::set<std::string> val(p.val_trials.begin(), p.val_trials.end());
  std::set<std::string> test(p.test_trials.begin(), p.test_trials.end());
  for (const auto& id : train) lookup(id);
  for (const auto& id : val) lookup(id);

  // Trial-level disjointness (the LOTO rule, required by every strategy).
  auto overlap = [&](const std::set<std::string>& a,
                     const std::set<std::string>& b) {
    for (const auto& id : a)
      if (b.count(id))
        r.violations.push_back({id, id, "trial:" + id});
  };
  overlap(test, train);
  overlap(test, val);
  for (const auto& id : train)
    if (val.count(id)) r.violations.push_back({id, id, "trial:" + id});

  if (strategy == CvStrategy::kLopeo || strategy == CvStrategy::kLoeo) {
    auto key_of = [&](const TrialRecord& t) {
      return strategy == CvStrategy::kLopeo
                 ? canonical_pair(t.attended, t.unattended.at(0)).encode()
                 : t.attended.str();
    };
    // Keys that must be absent from train and val.
    std::map<std::string, std::string> test_keys;  // key -> one test trial
    for (const auto& id : test) test_keys.emplace(key_of(lookup(id)), id);
    auto scan = [&](const std::set<std::string>& ids) {
      for (const auto& id : ids) {
        auto it = test_keys.find(key_of(lookup(id)));
        if (it != test_keys.end())
          r.violations.push_back({it->second, id, it->first});
      }
    };
    scan(train);
    scan(val);
  }

  r.passed = r.violations.empty();
  return r;
}

void write_fold_manifest(const FoldManifest& m, std::ostream& out) {
  json j;
  j["strategy"] = to_string(m.plan.strategy);
  j["k"] = m.plan.k;
  j["seed"] = m.plan.seed;
  json folds = json::array();
  for (const auto& fold : m.plan.folds) {
    json f = json::array();
    for (const auto& key : fold) f.push_back(key.value);
    folds.push_back(std::move(f));
  }
  j["folds"] = std::move(folds);
  json parts = json::array();
  for (const auto& p : m.partitions) {
    json o;
    o["t"] = p.test_fold;
    o["v"] = p.val_fold;
    o["train"] = p.train_trials;
    o["val"] = p.val_trials;
    o["test"] = p.test_trials;
    parts.push_back(std::move(o));
  }
  j["partitions"] = std::move(parts);
  out << j.dump(2) << "\n";
}

FoldManifest read_fold_manifest(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("folds manifest: invalid JSON: ") + e.what());
  }
  try {
    FoldManifest m;
    m.plan.strategy = cv_strategy_from_string(j.at("strategy").get<std::string>());
    m.plan.k = j.at("k").get<int>();
    m.plan.seed = j.at("seed").get<std::uint64_t>();
    GroupKey::Tag tag = tag_of(m.plan.strategy);
    for (const auto& fold : j.at("folds")) {
      std::vector<GroupKey> keys;
      for (const auto& v : fold) keys.push_back({tag, v.get<std::string>()});
      m.plan.folds.push_back(std::move(keys));
    }
    for (const auto& o : j.at("partitions")) {
      Partition p;
      p.test_fold = o.at("t").get<int>();
      p.val_fold = o.at("v").get<int>();
      p.train_trials = o.at("train").get<std::vector<std::string>>();
      p.val_trials = o.at("val").get<std::vector<std::string>>();
      p.test_trials = o.at("test").get<std::vector<std::string>>();
      m.partitions.push_back(std::move(p));
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("folds manifest: ") + e.what());
  }
}

}  // namespace aad
