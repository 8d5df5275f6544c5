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

#include "aad/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "aad/balance.hpp"
#include "aad/decoder.hpp"
#include "aad/errors.hpp"
#include "aad/memorizing.hpp"
#include "aad/metrics.hpp"
#include "aad/rng.hpp"
#include "aad/signal.hpp"
#include "nlohmann/json.hpp"

namespace aad {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct LoadedSignals {
  std::map<std::string, SignalSeries> eeg;                 // by trial_id
  std::map<StimulusId, std::vector<double>> envelopes;     // by stimulus
  double sample_rate_hz = 0.0;
};

LoadedSignals load_signals(const Dataset& d, const std::string& data_dir) {
  LoadedSignals sig;
  for (const auto& t : d.trials) {
    sig.eeg[t.trial_id] = read_signal((fs::path(data_dir) / *t.eeg_ref).string());
    for (const auto& [stim, ref] : t.envelope_refs) {
      if (sig.envelopes.count(stim)) continue;
      SignalSeries s = read_signal((fs::path(data_dir) / ref).string());
      if (s.channels != 1)
        throw InconsistentShapes("envelope '" + stim.str() +
                                 "' is not single-channel");
      sig.envelopes[stim] = std::move(s.data);
    }
  }
  sig.sample_rate_hz = sig.eeg.begin()->second.sample_rate_hz;
  return sig;
}

DecoderExample make_example(const TrialRecord& t, const LoadedSignals& sig) {
  DecoderExample ex;
  ex.eeg = sig.eeg.at(t.trial_id);
  ex.attended = sig.envelopes.at(t.attended);
  for (const auto& u : t.unattended) ex.competitors.push_back(sig.envelopes.at(u));
  return ex;
}

int modal_speaker_count(const Dataset& d) {
  std::map<int, int> counts;
  for (const auto& t : d.trials) ++counts[t.speaker_count()];
  return std::max_element(counts.begin(), counts.end(),
                          [](const auto& a, const auto& b) {
                            return a.second < b.second;
                          })
      ->first;
}

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd ms;
  for (double x : v) ms.mean += x;
  ms.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - ms.mean) * (x - ms.mean);
    ms.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return ms;
}

PartitionOutcome evaluate_partition(const ExperimentConfig& cfg,
                                    const Dataset& d, const LoadedSignals& sig,
                                    const Partition& p,
                                    std::uint64_t partition_seed) {
  std::map<std::string, const TrialRecord*> by_id;
  for (const auto& t : d.trials) by_id[t.trial_id] = &t;

  std::vector<DecoderExample> train, val;
  for (const auto& id : p.train_trials) train.push_back(make_example(*by_id.at(id), sig));
  for (const auto& id : p.val_trials) val.push_back(make_example(*by_id.at(id), sig));

  LinearDecoder linear;
  std::optional<MemorizingDecoder> memorizing;
  switch (cfg.decoder) {
    case DecoderKind::kRidge: {
      RidgeOptions opts;
      opts.lags = default_lag_window(sig.sample_rate_hz);
      linear = fit_ridge(train, val, opts);
      break;
    }
    case DecoderKind::kGradient: {
      TrainConfig tc;
      tc.loss = cfg.loss;
      tc.seed = partition_seed;
      linear = fit_gradient_decoder(train, val, tc).decoder;
      break;
    }
    case DecoderKind::kMemorizing: {
      RidgeOptions opts;
      opts.lags = default_lag_window(sig.sample_rate_hz);
      linear = fit_ridge(train, val, opts);
      memorizing = build_memorizing_decoder(linear, p, d, sig.envelopes,
                                            cfg.mem_alpha, cfg.mem_threshold);
      memorizing->window_seconds = cfg.window_seconds;
      break;
    }
  }

  EvalWindowing w{cfg.window_seconds};
  std::vector<WindowedScore> scores;
  for (const auto& id : p.test_trials) {
    const TrialRecord& t = *by_id.at(id);
    Reconstruction rec = memorizing
                             ? reconstruct_with_memory(*memorizing, sig.eeg.at(id))
                             : reconstruct(linear, sig.eeg.at(id));
    std::size_t n = rec.valid_end - rec.valid_begin;
    const auto& att_env = sig.envelopes.at(t.attended);
    std::vector<std::span<const double>> unatt;
    for (const auto& u : t.unattended)
      unatt.emplace_back(sig.envelopes.at(u).data() + rec.valid_begin, n);
    scores.push_back(windowed_accuracy(
        rec.valid(), {att_env.data() + rec.valid_begin, n}, unatt,
        sig.sample_rate_hz, w));
  }
  WindowedScore pooled = pool_scores(scores);

  PartitionOutcome out;
  out.t = p.test_fold;
  out.v = p.val_fold;
  out.acc = pooled.acc;
  out.rho_a = pooled.rho_a;
  out.rho_u = pooled.rho_u;
  out.delta_rho = pooled.rho_a - pooled.rho_u;
  return out;
}

json mean_std_json(const MeanStd& ms) {
  return json{{"mean", ms.mean}, {"std", ms.std}};
}

MeanStd mean_std_from_json(const json& j) {
  return {j.at("mean").get<double>(), j.at("std").get<double>()};
}

std::string format_pm(const MeanStd& ms) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f±%.4f", ms.mean, ms.std);
  return buf;
}

}  // namespace

std::string to_string(DecoderKind k) {
  switch (k) {
    case DecoderKind::kRidge:
      return "ridge";
    case DecoderKind::kGradient:
      return "gradient";
    case DecoderKind::kMemorizing:
      return "memorizing";
  }
  return "?";
}

DecoderKind decoder_kind_from_string(const std::string& s) {
  if (s == "ridge") return DecoderKind::kRidge;
  if (s == "gradient") return DecoderKind::kGradient;
  if (s == "memorizing") return DecoderKind::kMemorizing;
  throw InvalidConfig("unknown decoder '" + s + "'");
}

ExperimentResults run_experiment(const ExperimentConfig& cfg) {
  // Fail fast: everything referenced must exist and parse before any
  // training starts.
  Dataset d = load_trial_metadata(cfg.metadata_path);
  ValidationReport vr = validate_dataset(d, /*require_signals=*/true);
  if (!vr.ok()) {
    std::ostringstream msg;
    msg << "dataset validation failed with " << vr.error_count() << " error(s):";
    for (const auto& i : vr.issues)
      if (i.severity == ValidationSeverity::kError)
        msg << "\n  " << i.trial_id << ": " << i.message;
    throw InvalidConfig(msg.str());
  }
  LoadedSignals sig = load_signals(d, cfg.data_dir);

  FoldPlan plan;
  std::vector<Partition> partitions;
  if (cfg.folds_path) {
    std::ifstream in(*cfg.folds_path);
    if (!in) throw IoError("cannot open folds file: " + *cfg.folds_path);
    FoldManifest m = read_fold_manifest(in);
    plan = std::move(m.plan);
    partitions = std::move(m.partitions);
  } else {
    plan = make_fold_plan(d, cfg.strategy, cfg.k, cfg.seed);
    partitions = enumerate_partitions(plan, d);
  }
  if (cfg.val_per_test) {
    std::vector<Partition> kept;
    std::map<int, int> taken;
    for (auto& p : partitions)
      if (taken[p.test_fold]++ < *cfg.val_per_test) kept.push_back(std::move(p));
    partitions = std::move(kept);
  }

  std::vector<PartitionOutcome> outcomes(partitions.size());
  std::vector<std::string> failures(partitions.size());
  std::atomic<std::size_t> next{0};
  unsigned n_workers = cfg.jobs > 0
                           ? static_cast<unsigned>(cfg.jobs)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min<unsigned>(n_workers,
                                 static_cast<unsigned>(partitions.size()));

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= partitions.size()) break;
      try {
        outcomes[i] = evaluate_partition(cfg, d, sig, partitions[i],
                                         derive_seed(cfg.seed, i));
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned i = 0; i < n_workers; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  for (std::size_t i = 0; i < partitions.size(); ++i)
    if (!failures[i].empty())
      throw Error("partition (t=" + std::to_string(partitions[i].test_fold) +
                  ", v=" + std::to_string(partitions[i].val_fold) +
                  "): " + failures[i]);

  std::vector<double> acc, ra, ru, dr;
  for (const auto& o : outcomes) {
    acc.push_back(o.acc);
    ra.push_back(o.rho_a);
    ru.push_back(o.rho_u);
    dr.push_back(o.delta_rho);
  }

  ExperimentResults res;
  res.config = cfg;
  res.per_partition = outcomes;
  res.row.strategy = to_string(plan.strategy);
  res.row.dataset = d.name;
  res.row.chance_level = 1.0 / modal_speaker_count(d);
  res.row.balance_index = balance_index(d).bi;
  res.row.loss = cfg.decoder == DecoderKind::kGradient
                     ? to_string(cfg.loss)
                     : "ridge-mse";
  res.row.acc = mean_std(acc);
  res.row.rho_a = mean_std(ra);
  res.row.rho_u = mean_std(ru);
  res.row.delta_rho = mean_std(dr);
  return res;
}

void write_results(const ExperimentResults& r, std::ostream& out) {
  json j;
  j["schema_version"] = 1;
  json row;
  row["strategy"] = r.row.strategy;
  row["dataset"] = r.row.dataset;
  row["chance_level"] = r.row.chance_level;
  row["balance_index"] = r.row.balance_index;
  row["loss"] = r.row.loss;
  row["acc"] = mean_std_json(r.row.acc);
  row["rho_a"] = mean_std_json(r.row.rho_a);
  row["rho_u"] = mean_std_json(r.row.rho_u);
  row["delta_rho"] = mean_std_json(r.row.delta_rho);
  j["rows"] = json::array({row});
  json parts = json::array();
  for (const auto& o : r.per_partition) {
    parts.push_back(json{{"t", o.t},
                         {"v", o.v},
                         {"acc", o.acc},
                         {"rho_a", o.rho_a},
                         {"rho_u", o.rho_u},
                         {"delta_rho", o.delta_rho}});
  }
  j["per_partition"] = std::move(parts);
  json prov;
  prov["metadata"] = r.config.metadata_path;
  prov["data_dir"] = r.config.data_dir;
  prov["strategy"] = to_string(r.config.strategy);
  prov["k"] = r.config.k;
  prov["seed"] = r.config.seed;
  prov["decoder"] = to_string(r.config.decoder);
  prov["loss"] = to_string(r.config.loss);
  prov["window_seconds"] = r.config.window_seconds;
  prov["mem_alpha"] = r.config.mem_alpha;
  prov["mem_threshold"] = r.config.mem_threshold;
  if (r.config.folds_path) prov["folds"] = *r.config.folds_path;
  prov["tool_version"] = r.tool_version;
  j["provenance"] = std::move(prov);
  out << j.dump(2) << "\n";
}

ExperimentResults read_results(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("results file: invalid JSON: ") + e.what());
  }
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
    throw SchemaMismatch("unsupported results schema version");
  try {
    ExperimentResults r;
    const json& row = j.at("rows").at(0);
    r.row.strategy = row.at("strategy").get<std::string>();
    r.row.dataset = row.at("dataset").get<std::string>();
    r.row.chance_level = row.at("chance_level").get<double>();
    r.row.balance_index = row.at("balance_index").get<double>();
    r.row.loss = row.at("loss").get<std::string>();
    r.row.acc = mean_std_from_json(row.at("acc"));
    r.row.rho_a = mean_std_from_json(row.at("rho_a"));
    r.row.rho_u = mean_std_from_json(row.at("rho_u"));
    r.row.delta_rho = mean_std_from_json(row.at("delta_rho"));
    for (const auto& o : j.at("per_partition")) {
      PartitionOutcome p;
      p.t = o.at("t").get<int>();
      p.v = o.at("v").get<int>();
      p.acc = o.at("acc").get<double>();
      p.rho_a = o.at("rho_a").get<double>();
      p.rho_u = o.at("rho_u").get<double>();
      p.delta_rho = o.at("delta_rho").get<double>();
      r.per_partition.push_back(p);
    }
    const json& prov = j.at("provenance");
    r.config.metadata_path = prov.at("metadata").get<std::string>();
    r.config.data_dir = prov.at("data_dir").get<std::string>();
    r.config.strategy = cv_strategy_from_string(prov.at("strategy").get<std::string>());
    r.config.k = prov.at("k").get<int>();
    r.config.seed = prov.at("seed").get<std::uint64_t>();
    r.config.decoder = decoder_kind_from_string(prov.at("decoder").get<std::string>());
    r.config.loss = loss_kind_from_string(prov.at("loss").get<std::string>());
    r.config.window_seconds = prov.at("window_seconds").get<double>();
    r.tool_version = prov.at("tool_version").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("results file: ") + e.what());
  }
}

std::string summarize_results(const std::vector<ExperimentResults>& results,
                              ReportFormat format) {
  if (results.empty()) throw InvalidConfig("no results to summarize");

  std::vector<ResultsRow> rows;
  for (const auto& r : results) {
    double recomputed = r.row.rho_a.mean - r.row.rho_u.mean;
    if (std::abs(recomputed - r.row.delta_rho.mean) > 1e-9)
      throw SchemaMismatch("delta_rho inconsistent with rho_a - rho_u in '" +
                           r.row.dataset + "'");
    rows.push_back(r.row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.strategy != b.strategy) return a.strategy < b.strategy;
    return a.balance_index < b.balance_index;
  });

  std::ostringstream out;
  switch (format) {
    case ReportFormat::kJson: {
      json arr = json::array();
      for (const auto& r : rows) {
        json o;
        o["strategy"] = r.strategy;
        o["dataset"] = r.dataset;
        o["chance_level"] = r.chance_level;
        o["balance_index"] = r.balance_index;
        o["loss"] = r.loss;
        o["acc"] = mean_std_json(r.acc);
        o["rho_a"] = mean_std_json(r.rho_a);
        o["rho_u"] = mean_std_json(r.rho_u);
        o["delta_rho"] = mean_std_json(r.delta_rho);
        arr.push_back(std::move(o));
      }
      out << arr.dump(2) << "\n";
      break;
    }
    case ReportFormat::kCsv: {
      out << "strategy,dataset,chance_level,balance_index,loss,"
             "acc_mean,acc_std,rho_a_mean,rho_a_std,"
             "rho_u_mean,rho_u_std,delta_rho_mean,delta_rho_std\n";
      for (const auto& r : rows) {
        out << r.strategy << "," << r.dataset << "," << r.chance_level << ","
            << r.balance_index << "," << r.loss << "," << r.acc.mean << ","
            << r.acc.std << "," << r.rho_a.mean << "," << r.rho_a.std << ","
            << r.rho_u.mean << "," << r.rho_u.std << "," << r.delta_rho.mean
            << "," << r.delta_rho.std << "\n";
      }
      break;
    }
    case ReportFormat::kMarkdown: {
      out << "| strategy | dataset | chance | BI | loss | acc | rho_a | "
             "rho_u | delta_rho |\n";
      out << "|---|---|---|---|---|---|---|---|---|\n";
      for (const auto& r : rows) {
        char bi[16];
        std::snprintf(bi, sizeof(bi), "%.3f", r.balance_index);
        out << "| " << r.strategy << " | " << r.dataset << " | "
            << r.chance_level << " | " << bi << " | " << r.loss << " | "
            << format_pm(r.acc) << " | " << format_pm(r.rho_a) << " | "
            << format_pm(r.rho_u) << " | " << format_pm(r.delta_rho) << " |\n";
      }
      break;
    }
  }
  return out.str();
}

}  // namespace aad
