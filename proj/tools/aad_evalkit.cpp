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

// aad-evalkit: balance auditing, leakage-safe cross-validation and decoding
// experiments for auditory-attention datasets.
//
// Exit codes: 0 success, 2 validation failure, 3 leakage detected by audit,
// 4 training failure.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "aad/balance.hpp"
#include "aad/dataset.hpp"
#include "aad/errors.hpp"
#include "aad/experiment.hpp"
#include "aad/partition.hpp"
#include "aad/stats.hpp"
#include "aad/synth.hpp"
#include "nlohmann/json.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitValidation = 2;
constexpr int kExitLeakage = 3;
constexpr int kExitTraining = 4;

json balance_report_json(const aad::BalanceReport& r) {
  json j;
  j["n_audio"] = r.counts.n_audio();
  j["bi"] = r.bi;
  json per;
  for (const auto& [id, c] : r.counts.per_stimulus) {
    per[id.str()] = json{{"n_att", c.n_att},
                         {"n_unatt", c.n_unatt},
                         {"imbalance", r.per_stimulus_imbalance.at(id)}};
  }
  j["per_stimulus"] = std::move(per);
  return j;
}

struct GlobalOpts {
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string data_dir = ".";
};

int cmd_balance_compute(const std::string& metadata, bool per_subject) {
  aad::Dataset d = aad::load_trial_metadata(metadata);
  json out;
  out["dataset"] = d.name;
  out["pooled"] = balance_report_json(aad::balance_index(d));
  if (per_subject) {
    json per;
    for (const auto& [subj, rep] : aad::balance_index_per_subject(d))
      per[subj] = balance_report_json(rep);
    out["per_subject"] = std::move(per);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_balance_subset(const std::string& metadata, const std::string& target,
                       const std::string& out_path) {
  aad::Dataset d = aad::load_trial_metadata(metadata);
  aad::SubsetTarget t = target == "balanced" ? aad::SubsetTarget::kBalanced
                                             : aad::SubsetTarget::kExclusive;
  aad::SubsetResult res = aad::extreme_subset(d, t);
  std::ofstream out(out_path);
  if (!out) throw aad::IoError("cannot write " + out_path);
  aad::write_trial_metadata_csv(res.subset, out);
  json info;
  info["kept_trials"] = res.subset.trials.size();
  info["bi"] = res.report.bi;
  std::cout << info.dump(2) << "\n";
  return 0;
}

int cmd_split(const GlobalOpts& g, const std::string& metadata,
              const std::string& strategy, int k, const std::string& out_path) {
  aad::Dataset d = aad::load_trial_metadata(metadata);
  aad::FoldManifest m;
  m.plan = aad::make_fold_plan(d, aad::cv_strategy_from_string(strategy), k,
                               g.seed);
  m.partitions = aad::enumerate_partitions(m.plan, d);
  std::ofstream out(out_path);
  if (!out) throw aad::IoError("cannot write " + out_path);
  aad::write_fold_manifest(m, out);
  std::cerr << "wrote " << m.partitions.size() << " partitions to " << out_path
            << "\n";
  return 0;
}

int cmd_audit(const std::string& metadata, const std::string& folds,
              const std::string& strategy) {
  aad::Dataset d = aad::load_trial_metadata(metadata);
  std::ifstream in(folds);
  if (!in) throw aad::IoError("cannot open folds file: " + folds);
  aad::FoldManifest m = aad::read_fold_manifest(in);
  aad::CvStrategy s = aad::cv_strategy_from_string(strategy);

  json out = json::array();
  bool any_leak = false;
  for (const auto& p : m.partitions) {
    aad::AuditReport r = aad::audit_partition(p, d, s);
    json o;
    o["t"] = p.test_fold;
    o["v"] = p.val_fold;
    o["passed"] = r.passed;
    o["train_size"] = r.train_size;
    o["val_size"] = r.val_size;
    o["test_size"] = r.test_size;
    json viol = json::array();
    for (const auto& v : r.violations)
      viol.push_back(json{{"test_trial", v.test_trial},
                          {"leaking_trial", v.leaking_trial},
                          {"leaked_key", v.leaked_key}});
    o["violations"] = std::move(viol);
    out.push_back(std::move(o));
    any_leak = any_leak || !r.passed;
  }
  std::cout << out.dump(2) << "\n";
  return any_leak ? kExitLeakage : 0;
}

int cmd_synth(const GlobalOpts& g, const std::string& config_path,
              const std::string& out_dir, bool seed_given) {
  aad::ScenarioConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw aad::IoError("cannot open config: " + config_path);
    json j;
    in >> j;
    if (j.contains("n_pairs")) cfg.n_pairs = j["n_pairs"].get<int>();
    if (j.contains("repeats_per_pair"))
      cfg.repeats_per_pair = j["repeats_per_pair"].get<int>();
    if (j.contains("design"))
      cfg.design = aad::scenario_design_from_string(j["design"].get<std::string>());
    if (j.contains("channels")) cfg.channels = j["channels"].get<int>();
    if (j.contains("sample_rate_hz"))
      cfg.sample_rate_hz = j["sample_rate_hz"].get<double>();
    if (j.contains("trial_seconds"))
      cfg.trial_seconds = j["trial_seconds"].get<double>();
    if (j.contains("attended_gain"))
      cfg.attended_gain = j["attended_gain"].get<double>();
    if (j.contains("unattended_gain"))
      cfg.unattended_gain = j["unattended_gain"].get<double>();
    if (j.contains("noise_sigma")) cfg.noise_sigma = j["noise_sigma"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (seed_given) cfg.seed = g.seed;
  aad::Scenario sc = aad::build_scenario(cfg, out_dir);
  std::cerr << "wrote " << sc.dataset.trials.size() << " trials to " << out_dir
            << "\n";
  return 0;
}

int cmd_train(const GlobalOpts& g, aad::ExperimentConfig cfg,
              const std::string& out_path) {
  cfg.seed = g.seed;
  cfg.jobs = g.jobs;
  cfg.data_dir = g.data_dir;
  aad::ExperimentResults res = aad::run_experiment(cfg);
  std::ofstream out(out_path);
  if (!out) throw aad::IoError("cannot write " + out_path);
  aad::write_results(res, out);
  std::cerr << "acc " << res.row.acc.mean << " ± " << res.row.acc.std
            << " over " << res.per_partition.size() << " partitions\n";
  return 0;
}

int cmd_stats(const std::string& path_a, const std::string& path_b, int m) {
  auto load = [](const std::string& p) {
    std::ifstream in(p);
    if (!in) throw aad::IoError("cannot open results file: " + p);
    return aad::read_results(in);
  };
  aad::ExperimentResults a = load(path_a);
  aad::ExperimentResults b = load(path_b);
  if (a.per_partition.size() != b.per_partition.size())
    throw aad::InvalidConfig("results have different partition counts");

  // Folds are paired by partition index (same (t, v) enumeration order).
  struct Metric {
    const char* name;
    double aad::PartitionOutcome::* field;
  };
  const Metric metrics[] = {{"acc", &aad::PartitionOutcome::acc},
                            {"rho_a", &aad::PartitionOutcome::rho_a},
                            {"rho_u", &aad::PartitionOutcome::rho_u},
                            {"delta_rho", &aad::PartitionOutcome::delta_rho}};
  if (m <= 0) m = static_cast<int>(std::size(metrics));

  std::vector<double> raw_p;
  json out;
  for (const auto& metric : metrics) {
    std::vector<double> va, vb;
    for (std::size_t i = 0; i < a.per_partition.size(); ++i) {
      va.push_back(a.per_partition[i].*metric.field);
      vb.push_back(b.per_partition[i].*metric.field);
    }
    aad::WilcoxonResult w = aad::wilcoxon_signed_rank(va, vb);
    out[metric.name] = json{{"statistic", w.statistic},
                            {"p", w.p_two_sided},
                            {"n", w.n},
                            {"exact", w.exact}};
    raw_p.push_back(w.p_two_sided);
  }
  std::vector<double> adj = aad::bonferroni_adjust(raw_p, m);
  int i = 0;
  for (const auto& metric : metrics) out[metric.name]["p_bonferroni"] = adj[i++];
  out["m"] = m;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& files, const std::string& format) {
  std::vector<aad::ExperimentResults> results;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw aad::IoError("cannot open results file: " + f);
    results.push_back(aad::read_results(in));
  }
  aad::ReportFormat fmt = format == "csv"  ? aad::ReportFormat::kCsv
                          : format == "md" ? aad::ReportFormat::kMarkdown
                                           : aad::ReportFormat::kJson;
  std::cout << aad::summarize_results(results, fmt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balance auditing and leakage-safe evaluation for "
               "auditory-attention decoding datasets"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Global RNG seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores)");
  app.add_option("--data-dir", g.data_dir, "Root for signal file references");

  // balance
  auto* balance = app.add_subcommand("balance", "Balance-index analysis");
  balance->require_subcommand(1);
  auto* bc = balance->add_subcommand("compute", "Compute the balance index");
  std::string bc_metadata;
  bool bc_per_subject = false;
  bc->add_option("--metadata", bc_metadata, "Trial metadata CSV/JSON")->required();
  bc->add_flag("--per-subject", bc_per_subject, "Also report per subject");
  auto* bs = balance->add_subcommand("subset", "Extract an extreme subset");
  std::string bs_metadata, bs_target, bs_out;
  bs->add_option("--metadata", bs_metadata)->required();
  bs->add_option("--target", bs_target, "balanced | exclusive")
      ->required()
      ->check(CLI::IsMember({"balanced", "exclusive"}));
  bs->add_option("--out", bs_out, "Output metadata CSV")->required();

  // split
  auto* split = app.add_subcommand("split", "Generate a cross-validation plan");
  std::string sp_metadata, sp_strategy, sp_out;
  int sp_k = 4;
  split->add_option("--metadata", sp_metadata)->required();
  split->add_option("--strategy", sp_strategy, "loto | lopeo | loeo")
      ->required()
      ->check(CLI::IsMember({"loto", "lopeo", "loeo"}));
  split->add_option("--k", sp_k, "Fold count (>= 3)")->required();
  split->add_option("--out", sp_out, "Output folds.json")->required();

  // audit
  auto* audit = app.add_subcommand("audit", "Audit partitions for leakage");
  std::string au_metadata, au_folds, au_strategy;
  audit->add_option("--metadata", au_metadata)->required();
  audit->add_option("--folds", au_folds, "folds.json to audit")->required();
  audit->add_option("--strategy", au_strategy, "Audit rule set")
      ->required()
      ->check(CLI::IsMember({"loto", "lopeo", "loeo"}));

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
  std::string sy_config, sy_out;
  synth->add_option("--config", sy_config, "Scenario config JSON");
  synth->add_option("--out", sy_out, "Output directory")->required();

  // train
  auto* train = app.add_subcommand("train", "Train and evaluate decoders");
  aad::ExperimentConfig tc;
  std::string tr_strategy = "lopeo", tr_decoder = "ridge", tr_loss = "pcc";
  std::string tr_folds, tr_out;
  int tr_val_per_test = 0;
  train->add_option("--metadata", tc.metadata_path)->required();
  train->add_option("--folds", tr_folds, "Existing folds.json (else --strategy/--k)");
  train->add_option("--strategy", tr_strategy)
      ->check(CLI::IsMember({"loto", "lopeo", "loeo"}));
  train->add_option("--k", tc.k, "Fold count");
  train->add_option("--decoder", tr_decoder)
      ->check(CLI::IsMember({"ridge", "gradient", "memorizing"}));
  train->add_option("--loss", tr_loss)->check(CLI::IsMember({"pcc", "contrastive"}));
  train->add_option("--window-sec", tc.window_seconds, "Decision window length");
  train->add_option("--mem-alpha", tc.mem_alpha, "Memorizing blend weight");
  train->add_option("--mem-threshold", tc.mem_threshold, "Memorizing match threshold");
  train->add_option("--val-per-test", tr_val_per_test,
                    "Restrict validation folds per test fold (0 = all)");
  train->add_option("--out", tr_out, "Output results.json")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "Paired Wilcoxon tests on results");
  std::string st_a, st_b;
  int st_m = 0;
  stats->add_option("--results-a", st_a)->required();
  stats->add_option("--results-b", st_b)->required();
  stats->add_option("--m", st_m, "Bonferroni comparison count");

  // report
  auto* report = app.add_subcommand("report", "Merge results into a table");
  std::vector<std::string> rp_files;
  std::string rp_format = "json";
  report->add_option("files", rp_files, "results.json files")->required();
  report->add_option("--format", rp_format)
      ->check(CLI::IsMember({"json", "csv", "md"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (bc->parsed()) return cmd_balance_compute(bc_metadata, bc_per_subject);
    if (bs->parsed()) return cmd_balance_subset(bs_metadata, bs_target, bs_out);
    if (split->parsed()) return cmd_split(g, sp_metadata, sp_strategy, sp_k, sp_out);
    if (audit->parsed()) return cmd_audit(au_metadata, au_folds, au_strategy);
    if (synth->parsed())
      return cmd_synth(g, sy_config, sy_out, app.count("--seed") > 0);
    if (train->parsed()) {
      tc.strategy = aad::cv_strategy_from_string(tr_strategy);
      tc.decoder = aad::decoder_kind_from_string(tr_decoder);
      tc.loss = aad::loss_kind_from_string(tr_loss);
      if (!tr_folds.empty()) tc.folds_path = tr_folds;
      if (tr_val_per_test > 0) tc.val_per_test = tr_val_per_test;
      try {
        return cmd_train(g, tc, tr_out);
      } catch (const aad::Diverged& e) {
        std::cerr << "training failed: " << e.what() << "\n";
        return kExitTraining;
      } catch (const aad::Error& e) {
        // run_experiment wraps per-partition training failures.
        if (std::string(e.what()).rfind("partition (", 0) == 0) {
          std::cerr << "training failed: " << e.what() << "\n";
          return kExitTraining;
        }
        throw;
      }
    }
    if (stats->parsed()) return cmd_stats(st_a, st_b, st_m);
    if (report->parsed()) return cmd_report(rp_files, rp_format);
  } catch (const aad::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
