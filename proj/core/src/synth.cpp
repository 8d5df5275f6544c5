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

#include "aad/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "aad/errors.hpp"
#include "aad/rng.hpp"
#include "nlohmann/json.hpp"

namespace aad {
namespace {

namespace fs = std::filesystem;

constexpr double kEnvelopeCutoffHz = 8.0;

void validate(const ScenarioConfig& cfg) {
  if (cfg.n_pairs < 2) throw InvalidConfig("n_pairs must be >= 2");
  if (cfg.repeats_per_pair < 1) throw InvalidConfig("repeats_per_pair must be >= 1");
  if (cfg.channels < 1) throw InvalidConfig("channels must be >= 1");
  if (cfg.sample_rate_hz <= 0) throw InvalidConfig("sample_rate_hz must be > 0");
  if (cfg.trial_seconds <= 0) throw InvalidConfig("trial_seconds must be > 0");
  if (cfg.noise_sigma < 0) throw InvalidConfig("noise_sigma must be >= 0");
  if (cfg.design == ScenarioDesign::kBalanced && cfg.repeats_per_pair % 2 != 0)
    throw InfeasibleBalance(
        "balanced design needs an even repeats_per_pair, got " +
        std::to_string(cfg.repeats_per_pair));
}

std::string stimulus_name(int pair, bool second) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%02d%c", pair, second ? 'b' : 'a');
  return buf;
}

}  // namespace

std::string to_string(ScenarioDesign d) {
  return d == ScenarioDesign::kBalanced ? "balanced" : "exclusive";
}

ScenarioDesign scenario_design_from_string(const std::string& s) {
  if (s == "balanced") return ScenarioDesign::kBalanced;
  if (s == "exclusive") return ScenarioDesign::kExclusive;
  throw InvalidConfig("unknown scenario design '" + s + "'");
}

std::vector<double> generate_envelope(std::size_t length_samples,
                                      double sample_rate_hz,
                                      std::uint64_t seed) {
  if (length_samples < 2) throw InvalidConfig("envelope length must be >= 2");
  Rng rng(seed);

  double a = std::exp(-2.0 * 3.14159265358979323846 * kEnvelopeCutoffHz /
                      sample_rate_hz);
  std::vector<double> env(length_samples);
  double state = 0.0;
  for (double& v : env) {
    state = a * state + (1.0 - a) * rng.normal();
    v = std::max(0.0, state);  // half-wave rectify
  }

  double mean = 0.0;
  for (double v : env) mean += v;
  mean /= static_cast<double>(env.size());
  double ss = 0.0;
  for (double v : env) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(env.size()));
  for (double& v : env) v = (v - mean) / sd;
  return env;
}

SignalSeries synthesize_trial_eeg(const std::vector<double>& att_env,
                                  const std::vector<std::vector<double>>& unatt_envs,
                                  const ScenarioConfig& cfg,
                                  std::uint64_t trial_seed) {
  for (const auto& u : unatt_envs)
    if (u.size() != att_env.size())
      throw LengthMismatch("envelope lengths differ within one trial");

  // The mixing gains model fixed head geometry: one draw per scenario seed,
  // shared by every trial. Per-trial gains would leave nothing for a single
  // linear decoder to invert and the noiseless sanity floor (acc = 1.0)
  // would not exist.
  Rng gain_rng(derive_seed(cfg.seed, 0x6741u));
  Rng noise_rng(trial_seed);
  std::size_t n = att_env.size();
  auto channels = static_cast<std::size_t>(cfg.channels);

  SignalSeries eeg;
  eeg.channels = channels;
  eeg.sample_rate_hz = cfg.sample_rate_hz;
  eeg.data.assign(channels * n, 0.0);

  for (std::size_t c = 0; c < channels; ++c) {
    double g_att = cfg.attended_gain * gain_rng.normal();
    std::vector<double> g_unatt(unatt_envs.size());
    for (double& g : g_unatt) g = gain_rng.normal();
    double* ch = eeg.channel(c);
    for (std::size_t t = 0; t < n; ++t) {
      double v = g_att * att_env[t];
      for (std::size_t k = 0; k < unatt_envs.size(); ++k)
        v += cfg.unattended_gain * g_unatt[k] * unatt_envs[k][t];
      if (cfg.noise_sigma > 0) v += cfg.noise_sigma * noise_rng.normal();
      ch[t] = v;
    }
  }
  return eeg;
}

Scenario build_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
  validate(cfg);

  fs::create_directories(fs::path(out_dir) / "envelopes");
  fs::create_directories(fs::path(out_dir) / "eeg");

  auto length = static_cast<std::size_t>(cfg.trial_seconds * cfg.sample_rate_hz);

  Scenario sc;
  sc.out_dir = out_dir;
  sc.dataset.name = "synth." + to_string(cfg.design);

  // One fixed envelope per stimulus; repeats reuse it, which is exactly what
  // makes stimulus identity learnable.
  std::vector<std::vector<double>> envelopes;
  std::vector<StimulusId> stimuli;
  for (int p = 0; p < cfg.n_pairs; ++p) {
    for (int s = 0; s < 2; ++s) {
      std::string name = stimulus_name(p, s == 1);
      std::vector<double> env = generate_envelope(
          length, cfg.sample_rate_hz,
          derive_seed(cfg.seed, static_cast<std::uint64_t>(2 * p + s)));
      SignalSeries series;
      series.data = env;
      series.channels = 1;
      series.sample_rate_hz = cfg.sample_rate_hz;
      write_signal(series, (fs::path(out_dir) / "envelopes" / (name + ".f32")).string());
      envelopes.push_back(std::move(env));
      stimuli.emplace_back(name);
    }
  }

  int trial_index = 0;
  for (int p = 0; p < cfg.n_pairs; ++p) {
    const StimulusId& sa = stimuli[static_cast<std::size_t>(2 * p)];
    const StimulusId& sb = stimuli[static_cast<std::size_t>(2 * p + 1)];
    for (int r = 0; r < cfg.repeats_per_pair; ++r) {
      bool attend_first =
          cfg.design == ScenarioDesign::kExclusive ? true : (r % 2 == 0);
      const StimulusId& att = attend_first ? sa : sb;
      const StimulusId& unatt = attend_first ? sb : sa;
      std::size_t att_i = static_cast<std::size_t>(2 * p) + (attend_first ? 0 : 1);
      std::size_t un_i = static_cast<std::size_t>(2 * p) + (attend_first ? 1 : 0);

      char tid[32];
      std::snprintf(tid, sizeof(tid), "t_p%02d_r%02d", p, r);

      SignalSeries eeg = synthesize_trial_eeg(
          envelopes[att_i], {envelopes[un_i]}, cfg,
          derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(trial_index)));
      std::string eeg_rel = "eeg/" + std::string(tid) + ".f32";
      write_signal(eeg, (fs::path(out_dir) / eeg_rel).string());

      TrialRecord t;
      t.trial_id = tid;
      t.subject_id = "sub01";
      t.attended = att;
      t.unattended = {unatt};
      t.eeg_ref = eeg_rel;
      t.envelope_refs[att] = "envelopes/" + att.str() + ".f32";
      t.envelope_refs[unatt] = "envelopes/" + unatt.str() + ".f32";
      sc.dataset.trials.push_back(std::move(t));
      ++trial_index;
    }
  }

  {
    std::ofstream csv(fs::path(out_dir) / "trials.csv");
    if (!csv) throw IoError("cannot write trials.csv in " + out_dir);
    write_trial_metadata_csv(sc.dataset, csv);
  }
  {
    nlohmann::ordered_json manifest;
    manifest["n_pairs"] = cfg.n_pairs;
    manifest["repeats_per_pair"] = cfg.repeats_per_pair;
    manifest["design"] = to_string(cfg.design);
    manifest["channels"] = cfg.channels;
    manifest["sample_rate_hz"] = cfg.sample_rate_hz;
    manifest["trial_seconds"] = cfg.trial_seconds;
    manifest["attended_gain"] = cfg.attended_gain;
    manifest["unattended_gain"] = cfg.unattended_gain;
    manifest["noise_sigma"] = cfg.noise_sigma;
    manifest["seed"] = cfg.seed;
    manifest["trials"] = sc.dataset.trials.size();
    std::ofstream mf(fs::path(out_dir) / "manifest.json");
    if (!mf) throw IoError("cannot write manifest.json in " + out_dir);
    mf << manifest.dump(2) << "\n";
  }
  return sc;
}

}  // namespace aad
