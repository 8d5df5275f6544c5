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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aad/errors.hpp"
#include "aad/experiment.hpp"
#include "aad/synth.hpp"
#include "doctest.h"

using namespace aad;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("aad_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ScenarioConfig small_scenario(ScenarioDesign design, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.n_pairs = 4;
  cfg.repeats_per_pair = 2;
  cfg.design = design;
  cfg.channels = 4;
  cfg.trial_seconds = 20.0;
  cfg.seed = seed;
  return cfg;
}

ExperimentConfig experiment_for(const TempDir& dir) {
  ExperimentConfig cfg;
  cfg.metadata_path = (dir.path / "trials.csv").string();
  cfg.data_dir = dir.path.string();
  cfg.strategy = CvStrategy::kLoto;
  cfg.k = 3;
  cfg.window_seconds = 5.0;
  cfg.val_per_test = 1;  // keep the partition count small
  cfg.jobs = 2;
  return cfg;
}

}  // namespace

TEST_CASE("run_experiment: noiseless ridge decoding is perfect") {
  TempDir dir("exp_clean");
  ScenarioConfig sc = small_scenario(ScenarioDesign::kBalanced, 5);
  sc.noise_sigma = 0.0;
  build_scenario(sc, dir.path.string());

  ExperimentConfig cfg = experiment_for(dir);
  ExperimentResults res = run_experiment(cfg);

  CHECK(res.row.strategy == "loto");
  CHECK(res.row.chance_level == doctest::Approx(0.5));
  CHECK(res.row.balance_index == doctest::Approx(0.0));
  CHECK(res.row.acc.mean == doctest::Approx(1.0));
  CHECK(res.row.delta_rho.mean > 0.5);
  CHECK(res.per_partition.size() == 3);  // K=3, one val fold per test fold
  for (const auto& p : res.per_partition) {
    CHECK(p.acc == doctest::Approx(1.0));
    CHECK(p.delta_rho ==
          doctest::Approx(p.rho_a - p.rho_u).epsilon(1e-12));
  }
}

TEST_CASE("run_experiment is deterministic") {
  TempDir dir("exp_det");
  ScenarioConfig sc = small_scenario(ScenarioDesign::kBalanced, 11);
  sc.noise_sigma = 2.0;
  build_scenario(sc, dir.path.string());

  ExperimentConfig cfg = experiment_for(dir);
  cfg.seed = 3;
  ExperimentResults a = run_experiment(cfg);
  cfg.jobs = 1;  // thread count must not affect the outcome
  ExperimentResults b = run_experiment(cfg);

  std::ostringstream ja, jb;
  write_results(a, ja);
  write_results(b, jb);
  CHECK(ja.str() == jb.str());
}

TEST_CASE("results round-trip and schema checking") {
  TempDir dir("exp_rt");
  ScenarioConfig sc = small_scenario(ScenarioDesign::kExclusive, 21);
  sc.noise_sigma = 0.0;
  build_scenario(sc, dir.path.string());

  ExperimentConfig cfg = experiment_for(dir);
  ExperimentResults res = run_experiment(cfg);

  std::ostringstream out;
  write_results(res, out);
  std::istringstream in(out.str());
  ExperimentResults back = read_results(in);
  CHECK(back.row.strategy == res.row.strategy);
  CHECK(back.row.acc.mean == doctest::Approx(res.row.acc.mean).epsilon(1e-12));
  CHECK(back.per_partition.size() == res.per_partition.size());
  CHECK(back.config.k == cfg.k);
  CHECK(back.tool_version == kToolVersion);

  std::ostringstream out2;
  write_results(back, out2);
  CHECK(out.str() == out2.str());

  std::string wrong = out.str();
  auto pos = wrong.find("\"schema_version\": 1");
  REQUIRE(pos != std::string::npos);
  wrong.replace(pos, std::string("\"schema_version\": 1").size(),
                "\"schema_version\": 9");
  std::istringstream bad(wrong);
  CHECK_THROWS_AS(read_results(bad), SchemaMismatch);
}

TEST_CASE("run_experiment respects a prebuilt fold manifest") {
  TempDir dir("exp_folds");
  ScenarioConfig sc = small_scenario(ScenarioDesign::kBalanced, 31);
  sc.noise_sigma = 0.0;
  Scenario scenario = build_scenario(sc, dir.path.string());

  FoldManifest m;
  m.plan = make_fold_plan(scenario.dataset, CvStrategy::kLoto, 3, 123);
  m.partitions = enumerate_partitions(m.plan, scenario.dataset);
  std::string folds_path = (dir.path / "folds.json").string();
  {
    std::ofstream f(folds_path);
    write_fold_manifest(m, f);
  }

  ExperimentConfig cfg = experiment_for(dir);
  cfg.val_per_test.reset();
  cfg.folds_path = folds_path;
  ExperimentResults res = run_experiment(cfg);
  CHECK(res.per_partition.size() == m.partitions.size());
}

TEST_CASE("run_experiment fails fast on broken metadata") {
  TempDir dir("exp_bad");
  ScenarioConfig sc = small_scenario(ScenarioDesign::kBalanced, 41);
  build_scenario(sc, dir.path.string());
  // Duplicate a trial id in the metadata file.
  Dataset d = load_trial_metadata((dir.path / "trials.csv").string());
  d.trials[1].trial_id = d.trials[0].trial_id;
  {
    std::ofstream f(dir.path / "trials.csv");
    write_trial_metadata_csv(d, f);
  }
  ExperimentConfig cfg = experiment_for(dir);
  CHECK_THROWS_AS(run_experiment(cfg), Error);
}

TEST_CASE("summarize_results sorts and cross-checks") {
  TempDir dir("exp_sum");
  ScenarioConfig sc = small_scenario(ScenarioDesign::kExclusive, 51);
  sc.noise_sigma = 0.0;
  build_scenario(sc, dir.path.string());

  ExperimentConfig cfg = experiment_for(dir);
  ExperimentResults a = run_experiment(cfg);
  cfg.strategy = CvStrategy::kLopeo;
  cfg.k = 3;
  ExperimentResults b = run_experiment(cfg);

  std::string md = summarize_results({a, b}, ReportFormat::kMarkdown);
  CHECK(md.find("loto") != std::string::npos);
  CHECK(md.find("lopeo") != std::string::npos);
  // Sorted by strategy string: lopeo rows precede loto rows.
  CHECK(md.find("| lopeo ") < md.find("| loto "));

  std::string csv = summarize_results({a, b}, ReportFormat::kCsv);
  CHECK(csv.find("strategy") != std::string::npos);
  std::string js = summarize_results({a, b}, ReportFormat::kJson);
  CHECK(js.find("\"strategy\"") != std::string::npos);

  // A corrupted delta column must be caught.
  ExperimentResults bad = a;
  bad.row.delta_rho.mean += 0.5;
  CHECK_THROWS_AS(summarize_results({bad}, ReportFormat::kJson),
                  SchemaMismatch);
}
