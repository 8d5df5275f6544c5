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

#include <algorithm>

#include "aad/balance.hpp"
#include "aad/errors.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace aad;

namespace {

TrialRecord trial(const std::string& id, const std::string& att,
                  std::vector<std::string> unatt) {
  TrialRecord t;
  t.trial_id = id;
  t.subject_id = "sub";
  t.attended = StimulusId(att);
  for (auto& u : unatt) t.unattended.emplace_back(u);
  return t;
}

Dataset dataset(std::vector<TrialRecord> trials) {
  Dataset d;
  d.name = "test";
  d.trials = std::move(trials);
  return d;
}

}  // namespace

TEST_CASE("role_counts: each competitor increments its unattended count") {
  SUBCASE("symmetric two trials") {
    auto d = dataset({trial("t1", "A", {"B"}), trial("t2", "B", {"A"})});
    RoleCounts rc = role_counts(d);
    CHECK(rc.per_stimulus.at(StimulusId("A")).n_att == 1);
    CHECK(rc.per_stimulus.at(StimulusId("A")).n_unatt == 1);
    CHECK(rc.per_stimulus.at(StimulusId("B")).n_att == 1);
    CHECK(rc.per_stimulus.at(StimulusId("B")).n_unatt == 1);
  }
  SUBCASE("one 3-speaker trial") {
    auto d = dataset({trial("t1", "A", {"B", "C"})});
    RoleCounts rc = role_counts(d);
    CHECK(rc.n_audio() == 3);
    CHECK(rc.per_stimulus.at(StimulusId("A")).n_att == 1);
    CHECK(rc.per_stimulus.at(StimulusId("A")).n_unatt == 0);
    CHECK(rc.per_stimulus.at(StimulusId("B")).n_unatt == 1);
    CHECK(rc.per_stimulus.at(StimulusId("C")).n_unatt == 1);
  }
  SUBCASE("direct counting with repeats") {
    auto d = dataset({trial("t1", "A", {"B"}), trial("t2", "A", {"B"}),
                      trial("t3", "A", {"B"}), trial("t4", "B", {"A"})});
    RoleCounts rc = role_counts(d);
    CHECK(rc.per_stimulus.at(StimulusId("A")).n_att == 3);
    CHECK(rc.per_stimulus.at(StimulusId("A")).n_unatt == 1);
    CHECK(rc.per_stimulus.at(StimulusId("B")).n_att == 1);
    CHECK(rc.per_stimulus.at(StimulusId("B")).n_unatt == 3);
  }
  SUBCASE("empty dataset") {
    CHECK_THROWS_AS(role_counts(Dataset{}), EmptyDataset);
  }
}

TEST_CASE("balance_index hand values") {
  CHECK(balance_index(dataset({trial("t1", "A", {"B"}), trial("t2", "B", {"A"})}))
            .bi == doctest::Approx(0.0));
  CHECK(balance_index(dataset({trial("t1", "A", {"B"}), trial("t2", "A", {"B"})}))
            .bi == doctest::Approx(1.0));
  // A:(3,1), B:(1,3) -> (0.5 + 0.5) / 2 = 0.5
  CHECK(balance_index(dataset({trial("t1", "A", {"B"}), trial("t2", "A", {"B"}),
                               trial("t3", "A", {"B"}), trial("t4", "B", {"A"})}))
            .bi == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("balance_index properties over random metadata") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    testutil::RandomDatasetOptions opt;
    opt.max_competitors = (i % 3 == 0) ? 2 : 1;
    Dataset d = testutil::random_dataset(rng, opt);
    BalanceReport r = balance_index(d);

    CHECK(r.bi >= 0.0);
    CHECK(r.bi <= 1.0);

    // bi equals the mean of per-stimulus imbalances.
    double sum = 0.0;
    for (const auto& [id, v] : r.per_stimulus_imbalance) sum += v;
    CHECK(r.bi ==
          doctest::Approx(sum / r.counts.n_audio()).epsilon(1e-12));

    // Invariant under trial reordering.
    Dataset shuffled = d;
    rng.shuffle(shuffled.trials);
    CHECK(balance_index(shuffled).bi == doctest::Approx(r.bi).epsilon(1e-12));

    // Invariant under stimulus renaming.
    Dataset renamed = d;
    auto rename = [](const StimulusId& s) {
      return StimulusId("x_" + s.str());
    };
    for (auto& t : renamed.trials) {
      t.attended = rename(t.attended);
      for (auto& u : t.unattended) u = rename(u);
    }
    CHECK(balance_index(renamed).bi == doctest::Approx(r.bi).epsilon(1e-12));

    // Duplicating the dataset scales counts uniformly: bi unchanged.
    Dataset doubled = d;
    for (auto t : d.trials) {
      t.trial_id += "_copy";
      doubled.trials.push_back(std::move(t));
    }
    CHECK(balance_index(doubled).bi == doctest::Approx(r.bi).epsilon(1e-12));
  }
}

TEST_CASE("balance_index per subject") {
  auto d = dataset({trial("t1", "A", {"B"}), trial("t2", "B", {"A"}),
                    trial("t3", "C", {"D"})});
  d.trials[2].subject_id = "other";
  auto per = balance_index_per_subject(d);
  CHECK(per.at("sub").bi == doctest::Approx(0.0));
  CHECK(per.at("other").bi == doctest::Approx(1.0));
}

TEST_CASE("extreme_subset exclusive: greedy matches the exhaustive optimum") {
  auto d = dataset({trial("t1", "A", {"B"}), trial("t2", "B", {"A"}),
                    trial("t3", "A", {"B"})});
  SubsetResult r = extreme_subset(d, SubsetTarget::kExclusive);
  CHECK(r.report.bi == doctest::Approx(1.0));
  REQUIRE(r.subset.trials.size() == 2);
  CHECK(r.subset.trials[0].trial_id == "t1");
  CHECK(r.subset.trials[1].trial_id == "t3");

  // Exhaustive oracle over all 7 non-empty subsets: the largest subset with
  // bi = 1 has 2 trials.
  std::size_t best = 0;
  for (int mask = 1; mask < 8; ++mask) {
    Dataset sub;
    sub.name = "sub";
    for (int i = 0; i < 3; ++i)
      if (mask & (1 << i)) sub.trials.push_back(d.trials[static_cast<std::size_t>(i)]);
    if (balance_index(sub).bi == 1.0) best = std::max(best, sub.trials.size());
  }
  CHECK(best == r.subset.trials.size());
}

TEST_CASE("extreme_subset balanced") {
  SUBCASE("already balanced pair kept whole") {
    auto d = dataset({trial("t1", "A", {"B"}), trial("t2", "B", {"A"})});
    SubsetResult r = extreme_subset(d, SubsetTarget::kBalanced);
    CHECK(r.subset.trials.size() == 2);
    CHECK(r.report.bi == doctest::Approx(0.0));
  }
  SUBCASE("single one-way trial is infeasible") {
    auto d = dataset({trial("t1", "A", {"B"})});
    CHECK_THROWS_AS(extreme_subset(d, SubsetTarget::kBalanced), NoFeasibleSubset);
  }
  SUBCASE("surplus direction is trimmed") {
    auto d = dataset({trial("t1", "A", {"B"}), trial("t2", "A", {"B"}),
                      trial("t3", "B", {"A"})});
    SubsetResult r = extreme_subset(d, SubsetTarget::kBalanced);
    CHECK(r.subset.trials.size() == 2);
    CHECK(r.report.bi == doctest::Approx(0.0));
  }
}

TEST_CASE("extreme_subset targets hold over random paired metadata") {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    Dataset d = testutil::random_paired_dataset(rng, 4, 12);
    SubsetResult ex = extreme_subset(d, SubsetTarget::kExclusive);
    CHECK(ex.report.bi == doctest::Approx(1.0));
    try {
      SubsetResult bal = extreme_subset(d, SubsetTarget::kBalanced);
      CHECK(bal.report.bi == doctest::Approx(0.0));
    } catch (const NoFeasibleSubset&) {
      // Legitimate when every pair is attended one-way only.
    }
  }
}
