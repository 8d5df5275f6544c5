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

// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "aad/balance.hpp"
#include "aad/dataset.hpp"
#include "aad/experiment.hpp"
#include "aad/metrics.hpp"
#include "aad/partition.hpp"
#include "aad/rng.hpp"
#include "aad/stats.hpp"
#include "aad/synth.hpp"
#include "aad/trainer.hpp"

using namespace aad;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("aad_accept_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Checker {
  bool ok = true;
  std::string first_failure;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
};

TrialRecord trial(std::string id, std::string att,
                  std::vector<std::string> unatt, std::string subject = "s1") {
  TrialRecord t;
  t.trial_id = std::move(id);
  t.subject_id = std::move(subject);
  t.attended = StimulusId(std::move(att));
  for (auto& u : unatt) t.unattended.emplace_back(std::move(u));
  return t;
}

Dataset random_two_speaker_dataset(Rng& rng, int min_pairs) {
  int n_stim = 2 * min_pairs + static_cast<int>(rng.uniform_below(5));
  std::vector<std::string> stim;
  for (int i = 0; i < n_stim; ++i) stim.push_back("S" + std::to_string(i));

  Dataset d;
  d.name = "random";
  int pairs = min_pairs + static_cast<int>(rng.uniform_below(4));
  int next_id = 0;
  for (int p = 0; p < pairs; ++p) {
    // Distinct unordered pair per p, so LOPEO has enough grouping keys.
    std::size_t a = rng.uniform_below(static_cast<std::uint64_t>(n_stim));
    std::size_t b = rng.uniform_below(static_cast<std::uint64_t>(n_stim - 1));
    if (b >= a) ++b;
    int reps = 1 + static_cast<int>(rng.uniform_below(3));
    for (int r = 0; r < reps; ++r) {
      bool flip = rng.uniform_below(2) == 1;
      d.trials.push_back(trial("t" + std::to_string(next_id++),
                               stim[flip ? b : a], {stim[flip ? a : b]},
                               "s" + std::to_string(rng.uniform_below(3))));
    }
  }
  return d;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --- criterion 1 -----------------------------------------------------------

bool criterion_balance_suite(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  Checker c;
  Rng rng(101);
  for (int iter = 0; iter < 500; ++iter) {
    Dataset d = random_two_speaker_dataset(rng, 2);
    double bi = balance_index(d).bi;
    c.expect(bi >= 0.0 && bi <= 1.0, "BI out of [0, 1]");

    // Renaming (order-preserving) and reordering leave BI unchanged.
    Dataset renamed = d;
    for (auto& t : renamed.trials) {
      t.attended = StimulusId(t.attended.str() + "x");
      for (auto& u : t.unattended) u = StimulusId(u.str() + "x");
    }
    Dataset reordered = d;
    std::reverse(reordered.trials.begin(), reordered.trials.end());
    c.expect(balance_index(renamed).bi == bi, "renaming changed BI");
    c.expect(balance_index(reordered).bi == bi, "reordering changed BI");

    // Constructed equal-role dataset: every stimulus attended and
    // unattended equally often.
    Dataset balanced;
    int pairs = 1 + static_cast<int>(rng.uniform_below(4));
    int reps = 1 + static_cast<int>(rng.uniform_below(3));
    int id = 0;
    for (int p = 0; p < pairs; ++p) {
      std::string a = "A" + std::to_string(p), b = "B" + std::to_string(p);
      for (int r = 0; r < reps; ++r) {
        balanced.trials.push_back(trial("e" + std::to_string(id++), a, {b}));
        balanced.trials.push_back(trial("e" + std::to_string(id++), b, {a}));
      }
    }
    c.expect(balance_index(balanced).bi == 0.0, "equal-role BI != 0");

    // Constructed exclusive-role dataset: roles never mix.
    Dataset exclusive;
    for (int p = 0; p < pairs; ++p)
      for (int r = 0; r < reps; ++r)
        exclusive.trials.push_back(
            trial("x" + std::to_string(p) + "_" + std::to_string(r),
                  "A" + std::to_string(p), {"B" + std::to_string(p)}));
    c.expect(balance_index(exclusive).bi == 1.0, "exclusive-role BI != 1");
  }
  double secs = elapsed_s(t0);
  c.expect(secs < 5.0, "runtime budget exceeded");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "500 random sets, %.2f s", secs);
  detail = c.ok ? buf : c.first_failure;
  return c.ok;
}

// --- criterion 2 -----------------------------------------------------------

bool criterion_hand_values(std::string& detail) {
  Checker c;

  // Role counts A:(3,1), B:(1,3).
  Dataset d;
  d.trials = {trial("t1", "A", {"B"}), trial("t2", "A", {"B"}),
              trial("t3", "A", {"B"}), trial("t4", "B", {"A"})};
  c.expect(balance_index(d).bi == 0.5, "BI hand value != 0.5");

  std::vector<double> x{1.0, 2.0, 3.0}, y{1.0, 2.0, 4.0};
  c.expect(std::abs(pearson(x, y) - 9.0 / std::sqrt(84.0)) <= 1e-12,
           "pearson hand value off");

  // Orthonormal zero-mean basis of R^4 makes the correlations exact:
  // rho_a = 0.5, rho_u1 = 0.2, rho_u2 = 0, so L = -0.5 + (0.2 + 0) / 2.
  std::vector<double> e1{0.5, -0.5, 0.5, -0.5};
  std::vector<double> e2{0.5, 0.5, -0.5, -0.5};
  std::vector<double> e3{0.5, -0.5, -0.5, 0.5};
  auto mix = [&](double a, const std::vector<double>& u, double b,
                 const std::vector<double>& v) {
    std::vector<double> r(4);
    for (int i = 0; i < 4; ++i) r[static_cast<std::size_t>(i)] =
        a * u[static_cast<std::size_t>(i)] + b * v[static_cast<std::size_t>(i)];
    return r;
  };
  std::vector<double> pred = e1;
  std::vector<double> att = mix(0.5, e1, std::sqrt(3.0) / 2.0, e2);
  std::vector<double> u1 = mix(0.2, e1, std::sqrt(1.0 - 0.04), e3);
  std::vector<double> u2 = e3;
  std::vector<std::span<const double>> unatt{u1, u2};
  double loss = contrastive_pcc_loss(pred, att, unatt);
  c.expect(std::abs(loss - (-0.4)) <= 1e-12, "contrastive hand value off");

  detail = c.ok ? "BI 0.5, rho 9/sqrt(84), contrastive -0.4" : c.first_failure;
  return c.ok;
}

// --- criterion 3 -----------------------------------------------------------

bool criterion_partition_audit(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  Checker c;
  Rng rng(202);
  for (int iter = 0; iter < 200; ++iter) {
    Dataset d = random_two_speaker_dataset(rng, 6);
    for (int k = 3; k <= 5; ++k) {
      FoldPlan plan = make_fold_plan(d, CvStrategy::kLopeo, k,
                                     static_cast<std::uint64_t>(iter));
      for (const Partition& p : enumerate_partitions(plan, d)) {
        AuditReport lopeo = audit_partition(p, d, CvStrategy::kLopeo);
        c.expect(lopeo.passed && lopeo.violations.empty(),
                 "LOPEO partition leaks a pair");
        c.expect(audit_partition(p, d, CvStrategy::kLoto).passed,
                 "LOPEO partition fails the LOTO audit");
      }
    }
  }

  // A trial-disjoint split that shares the stimulus pair across splits:
  // valid under LOTO, rejected by the LOPEO audit.
  Dataset d;
  d.trials = {trial("t1", "A", {"B"}), trial("t2", "B", {"A"}),
              trial("t3", "C", {"D"})};
  Partition p;
  p.train_trials = {"t2"};
  p.val_trials = {"t3"};
  p.test_trials = {"t1"};
  c.expect(audit_partition(p, d, CvStrategy::kLoto).passed,
           "constructed partition should pass LOTO");
  AuditReport bad = audit_partition(p, d, CvStrategy::kLopeo);
  c.expect(!bad.passed && !bad.violations.empty(),
           "constructed pair leak not detected");

  double secs = elapsed_s(t0);
  c.expect(secs < 10.0, "runtime budget exceeded");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "200 sets x K in {3,4,5}, %.2f s", secs);
  detail = c.ok ? buf : c.first_failure;
  return c.ok;
}

// --- criterion 4 -----------------------------------------------------------

bool criterion_gradient_check(std::string& detail) {
  Checker c;
  Rng rng(303);
  const double h = 1e-6;
  double worst = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    std::size_t n = 8 + rng.uniform_below(56);
    std::vector<double> pred(n), target(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = rng.normal();
      target[i] = rng.normal();
    }
    std::vector<double> g = pcc_gradient(pred, target);

    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> hi = pred, lo = pred;
      hi[j] += h;
      lo[j] -= h;
      double fd = (pearson(hi, target) - pearson(lo, target)) / (2.0 * h);
      num += (g[j] - fd) * (g[j] - fd);
      den += fd * fd;
    }
    double rel = std::sqrt(num) / std::max(std::sqrt(den), 1e-30);
    worst = std::max(worst, rel);
    c.expect(rel < 1e-5, "gradient relative error >= 1e-5");
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "100 cases, worst relative error %.2e",
                worst);
  detail = c.ok ? buf : c.first_failure;
  return c.ok;
}

// --- criterion 5 -----------------------------------------------------------

// Independent oracle: recompute average ranks from scratch and enumerate all
// 2^n sign assignments of the realized ranks.
double oracle_wilcoxon_p(const std::vector<double>& a,
                         const std::vector<double>& b) {
  std::vector<double> diff;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) diff.push_back(a[i] - b[i]);
  const int n = static_cast<int>(diff.size());

  std::vector<int> idx(diff.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) {
    return std::abs(diff[static_cast<std::size_t>(x)]) <
           std::abs(diff[static_cast<std::size_t>(y)]);
  });
  std::vector<double> rank(diff.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() &&
           std::abs(diff[static_cast<std::size_t>(idx[j])]) ==
               std::abs(diff[static_cast<std::size_t>(idx[i])]))
      ++j;
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      rank[static_cast<std::size_t>(idx[k])] = avg;
    i = j;
  }

  double w_plus = 0.0;
  for (std::size_t i = 0; i < diff.size(); ++i)
    if (diff[i] > 0) w_plus += rank[i];

  const double eps = 1e-9;
  long long le = 0, ge = 0;
  long long total = 1LL << n;
  for (long long mask = 0; mask < total; ++mask) {
    double w = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1LL << i)) w += rank[static_cast<std::size_t>(i)];
    if (w <= w_plus + eps) ++le;
    if (w >= w_plus - eps) ++ge;
  }
  double p = 2.0 * std::min(static_cast<double>(le), static_cast<double>(ge)) /
             static_cast<double>(total);
  return std::min(1.0, p);
}

bool criterion_wilcoxon(std::string& detail) {
  Checker c;
  Rng rng(404);
  for (int iter = 0; iter < 100; ++iter) {
    int n = 5 + static_cast<int>(rng.uniform_below(6));  // 5..10 pairs
    std::vector<double> a(static_cast<std::size_t>(n)),
        b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = rng.normal();
      double d = rng.normal();
      // Quantize half of the cases so tied |differences| actually occur.
      if (iter % 2 == 0) d = std::round(d * 2.0) / 2.0;
      b[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] - d;
    }
    bool all_zero = true;
    for (int i = 0; i < n; ++i)
      if (a[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i)])
        all_zero = false;
    if (all_zero) continue;
    int nonzero = 0;
    for (int i = 0; i < n; ++i)
      if (a[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i)])
        ++nonzero;
    if (nonzero < 5) continue;

    WilcoxonResult r = wilcoxon_signed_rank(a, b);
    c.expect(r.exact, "n <= 10 must use the exact branch");
    double oracle = oracle_wilcoxon_p(a, b);
    c.expect(std::abs(r.p_two_sided - oracle) <= 1e-12,
             "exact p disagrees with the enumeration oracle");
  }

  std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> b{0.5, 1.0, 2.0, 3.0, 4.0};
  WilcoxonResult r = wilcoxon_signed_rank(a, b);
  c.expect(std::abs(r.p_two_sided - 0.0625) <= 1e-15,
           "n=5 concordant case p != 0.0625");

  detail = c.ok ? "100 random samples vs 2^n oracle, p(n=5) = 0.0625"
                : c.first_failure;
  return c.ok;
}

// --- criterion 6 -----------------------------------------------------------

bool criterion_noiseless(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  Checker c;
  TempDir dir("noiseless");

  ScenarioConfig sc;
  sc.n_pairs = 4;
  sc.repeats_per_pair = 2;
  sc.design = ScenarioDesign::kBalanced;
  sc.channels = 4;
  sc.trial_seconds = 20.0;
  sc.noise_sigma = 0.0;
  sc.seed = 7;
  build_scenario(sc, dir.path.string());

  for (CvStrategy strategy :
       {CvStrategy::kLoto, CvStrategy::kLopeo, CvStrategy::kLoeo}) {
    ExperimentConfig cfg;
    cfg.metadata_path = (dir.path / "trials.csv").string();
    cfg.data_dir = dir.path.string();
    cfg.strategy = strategy;
    cfg.k = 3;
    cfg.decoder = DecoderKind::kRidge;
    cfg.window_seconds = 5.0;
    ExperimentResults res = run_experiment(cfg);
    c.expect(!res.per_partition.empty(), "no partitions produced");
    for (const auto& p : res.per_partition)
      c.expect(p.acc == 1.0, "partition accuracy below 1.0 under " +
                                 to_string(strategy));
  }

  double secs = elapsed_s(t0);
  c.expect(secs < 30.0, "runtime budget exceeded");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "acc 1.0 on all partitions, %.1f s", secs);
  detail = c.ok ? buf : c.first_failure;
  return c.ok;
}

// --- criterion 7 -----------------------------------------------------------

bool criterion_overestimation(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  Checker c;

  auto mean_acc = [&](ScenarioDesign design, CvStrategy strategy) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      TempDir dir("demo_" + to_string(design) + "_" + std::to_string(seed) +
                  "_" + to_string(strategy));
      ScenarioConfig sc;  // default calibrated scenario
      sc.design = design;
      sc.seed = seed;
      build_scenario(sc, dir.path.string());

      ExperimentConfig cfg;
      cfg.metadata_path = (dir.path / "trials.csv").string();
      cfg.data_dir = dir.path.string();
      cfg.strategy = strategy;
      cfg.k = 4;
      cfg.seed = 1;
      cfg.decoder = DecoderKind::kMemorizing;
      cfg.window_seconds = 10.0;
      sum += run_experiment(cfg).row.acc.mean;
    }
    return sum / 5.0;
  };

  double loto_bi1 = mean_acc(ScenarioDesign::kExclusive, CvStrategy::kLoto);
  double lopeo_bi1 = mean_acc(ScenarioDesign::kExclusive, CvStrategy::kLopeo);
  double loto_bi0 = mean_acc(ScenarioDesign::kBalanced, CvStrategy::kLoto);
  double lopeo_bi0 = mean_acc(ScenarioDesign::kBalanced, CvStrategy::kLopeo);

  c.expect(loto_bi1 - lopeo_bi1 >= 0.10, "acc(LOTO,BI1)-acc(LOPEO,BI1) < 0.10");
  c.expect(loto_bi1 - loto_bi0 >= 0.10, "acc(LOTO,BI1)-acc(LOTO,BI0) < 0.10");
  c.expect(std::abs(lopeo_bi1 - lopeo_bi0) <= 0.07,
           "|acc(LOPEO,BI1)-acc(LOPEO,BI0)| > 0.07");

  double secs = elapsed_s(t0);
  c.expect(secs < 300.0, "runtime budget exceeded");
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "LOTO/LOPEO acc: BI1 %.3f/%.3f, BI0 %.3f/%.3f, %.0f s",
                loto_bi1, lopeo_bi1, loto_bi0, lopeo_bi0, secs);
  detail = c.ok ? buf : (c.first_failure + " (" + buf + ")");
  return c.ok;
}

// --- criterion 8 -----------------------------------------------------------

bool criterion_schedule(std::string& detail) {
  Checker c;
  TrainConfig cfg;  // patience 5, cooldown 5, early stop 10

  // Stagnant validation loss: the first reduction lands at the end of
  // epoch 6 (epochs 2..6 are the 5 stagnant epochs), and the rate is halved
  // from epoch 7 onward.
  {
    TrainConfig quiet = cfg;
    quiet.early_stop_patience = 100;
    std::vector<double> losses(20, 1.0);
    TrainingLog log = simulate_schedule(losses, quiet);
    std::vector<int> reduced;
    for (const auto& e : log.epochs)
      if (e.lr_reduced) reduced.push_back(e.epoch);
    c.expect(reduced == std::vector<int>{6, 16},
             "reductions not at epochs 6 and 16 (cooldown violated)");
    c.expect(log.epochs.size() == 20 && !log.early_stopped,
             "schedule stopped despite disabled early stopping");
    c.expect(log.epochs[6].learning_rate ==
                 0.5 * log.epochs[0].learning_rate,
             "rate not halved after the first reduction");
  }

  // Strictly worsening validation loss: stop at epoch 11 with patience 10.
  {
    std::vector<double> losses;
    for (int e = 0; e < 30; ++e) losses.push_back(1.0 + 0.1 * e);
    TrainingLog log = simulate_schedule(losses, cfg);
    c.expect(log.early_stopped, "worsening loss did not stop training");
    c.expect(static_cast<int>(log.epochs.size()) == 11 &&
                 log.epochs.back().epoch == 11,
             "stop epoch != 11");
    c.expect(log.best_epoch == 1, "best epoch != 1");
  }

  detail = c.ok ? "halve at 6, cooldown to 16, early stop at 11"
                : c.first_failure;
  return c.ok;
}

// --- criterion 9 -----------------------------------------------------------

bool criterion_determinism(std::string& detail) {
  Checker c;
  TempDir dir_a("det_a"), dir_b("det_b");

  ScenarioConfig sc;
  sc.n_pairs = 4;
  sc.repeats_per_pair = 2;
  sc.channels = 4;
  sc.trial_seconds = 20.0;
  sc.noise_sigma = 2.0;
  sc.seed = 13;
  build_scenario(sc, dir_a.path.string());
  build_scenario(sc, dir_b.path.string());

  // Scenario artifacts are byte-identical across directories.
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const auto& entry : fs::recursive_directory_iterator(dir_a.path)) {
    if (!entry.is_regular_file()) continue;
    fs::path rel = fs::relative(entry.path(), dir_a.path);
    c.expect(slurp(entry.path()) == slurp(dir_b.path / rel),
             "scenario artifact differs: " + rel.string());
  }

  // Fold manifests from repeated plans are byte-identical.
  Dataset d = load_trial_metadata((dir_a.path / "trials.csv").string());
  auto manifest = [&]() {
    FoldManifest m;
    m.plan = make_fold_plan(d, CvStrategy::kLopeo, 4, 99);
    m.partitions = enumerate_partitions(m.plan, d);
    std::ostringstream out;
    write_fold_manifest(m, out);
    return out.str();
  };
  c.expect(manifest() == manifest(), "fold manifests differ");

  // Results files from repeated end-to-end runs are byte-identical.
  ExperimentConfig cfg;
  cfg.metadata_path = (dir_a.path / "trials.csv").string();
  cfg.data_dir = dir_a.path.string();
  cfg.strategy = CvStrategy::kLoto;
  cfg.k = 3;
  cfg.seed = 42;
  cfg.decoder = DecoderKind::kMemorizing;
  cfg.window_seconds = 5.0;
  auto results = [&]() {
    std::ostringstream out;
    write_results(run_experiment(cfg), out);
    return out.str();
  };
  c.expect(results() == results(), "results files differ");

  detail = c.ok ? "artifacts, fold manifests and results byte-identical"
                : c.first_failure;
  return c.ok;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    bool (*run)(std::string&);
  };
  const Entry entries[] = {
      {"balance-index invariants", criterion_balance_suite},
      {"hand-value checks", criterion_hand_values},
      {"partition-audit suite", criterion_partition_audit},
      {"PCC gradient check", criterion_gradient_check},
      {"exact Wilcoxon vs enumeration oracle", criterion_wilcoxon},
      {"noiseless sanity", criterion_noiseless},
      {"overestimation demonstration", criterion_overestimation},
      {"schedule conformance", criterion_schedule},
      {"determinism", criterion_determinism},
  };

  int failures = 0;
  int id = 0;
  for (const Entry& e : entries) {
    ++id;
    std::string det;
    bool ok = false;
    try {
      ok = e.run(det);
    } catch (const std::exception& ex) {
      det = std::string("exception: ") + ex.what();
    }
    if (!ok) ++failures;
    std::printf("criterion %d: %s  %s (%s)\n", id, ok ? "PASS" : "FAIL",
                e.name, det.c_str());
    std::fflush(stdout);
  }
  return failures;
}
