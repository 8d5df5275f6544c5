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

#ifndef AAD_EXPERIMENT_HPP_
#define AAD_EXPERIMENT_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aad/dataset.hpp"
#include "aad/partition.hpp"
#include "aad/trainer.hpp"

namespace aad {

inline constexpr const char* kToolVersion = "0.1.0";

enum class DecoderKind { kRidge, kGradient, kMemorizing };

std::string to_string(DecoderKind k);
DecoderKind decoder_kind_from_string(const std::string& s);

struct ExperimentConfig {
  std::string metadata_path;
  std::string data_dir;
  CvStrategy strategy = CvStrategy::kLopeo;
  int k = 4;
  std::uint64_t seed = 0;
  DecoderKind decoder = DecoderKind::kRidge;
  LossKind loss = LossKind::kPcc;
  double window_seconds = 10.0;
  double mem_alpha = 0.85;
  double mem_threshold = 0.0;
  int jobs = 0;  // 0 = hardware concurrency
  std::optional<int> val_per_test;  // restrict validation folds per test fold
  std::optional<std::string> folds_path;  // use an existing folds.json
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample std across partitions
};

struct PartitionOutcome {
  int t = 0;
  int v = 0;
  double acc = 0.0;
  double rho_a = 0.0;
  double rho_u = 0.0;
  double delta_rho = 0.0;
};

// One summary-table row: per-configuration decoding outcome.
struct ResultsRow {
  std::string strategy;
  std::string dataset;
  double chance_level = 0.0;
  double balance_index = 0.0;
  std::string loss;
  MeanStd acc, rho_a, rho_u, delta_rho;
};

struct ExperimentResults {
  ResultsRow row;
  std::vector<PartitionOutcome> per_partition;
  // Provenance: enough to reproduce the run.
  ExperimentConfig config;
  std::string tool_version = kToolVersion;
};

// Full pipeline for one configuration: ingest, validate (fail fast), fold
// plan, one decoder per (test, val) partition, windowed evaluation on each
// test split, mean +- std aggregation. Reproducible per seed; training
// failures carry the (t, v) index.
ExperimentResults run_experiment(const ExperimentConfig& cfg);

void write_results(const ExperimentResults& r, std::ostream& out);
ExperimentResults read_results(std::istream& in);

enum class ReportFormat { kJson, kCsv, kMarkdown };

// Merges rows from several results files into one table sorted by strategy
// then balance index; recomputes and cross-checks the delta_rho column.
std::string summarize_results(const std::vector<ExperimentResults>& results,
                              ReportFormat format);

}  // namespace aad

#endif  // AAD_EXPERIMENT_HPP_
