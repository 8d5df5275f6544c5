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

#include "aad/metrics.hpp"

#include <cmath>

#include "aad/errors.hpp"

namespace aad {
namespace {

struct CenteredStats {
  double mean = 0.0;
  double norm = 0.0;  // ||x - mean||
};

CenteredStats center_stats(std::span<const double> x) {
  CenteredStats s;
  for (double v : x) s.mean += v;
  s.mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  s.norm = std::sqrt(ss);
  return s;
}

bool is_constant(std::span<const double> x) {
  for (double v : x)
    if (v != x[0]) return false;
  return true;
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw LengthMismatch("series lengths differ: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
  if (x.size() < 2) throw LengthMismatch("need at least 2 samples");
  if (is_constant(x) || is_constant(y))
    throw ConstantSeries("correlation undefined for a constant series");
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  CenteredStats sx = center_stats(x);
  CenteredStats sy = center_stats(y);
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    dot += (x[i] - sx.mean) * (y[i] - sy.mean);
  return dot / (sx.norm * sy.norm);
}

double pcc_loss(std::span<const double> pred, std::span<const double> att) {
  return -pearson(pred, att);
}

double contrastive_pcc_loss(std::span<const double> pred,
                            std::span<const double> att,
                            const std::vector<std::span<const double>>& unatt) {
  if (unatt.empty())
    throw LengthMismatch("contrastive loss needs at least one competitor");
  double loss = -pearson(pred, att);
  double mean_u = 0.0;
  for (const auto& u : unatt) mean_u += pearson(pred, u);
  return loss + mean_u / static_cast<double>(unatt.size());
}

std::vector<double> pcc_gradient(std::span<const double> pred,
                                 std::span<const double> target) {
  check_pair(pred, target);
  CenteredStats sp = center_stats(pred);
  CenteredStats st = center_stats(target);
  double dot = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    dot += (pred[i] - sp.mean) * (target[i] - st.mean);
  double rho = dot / (sp.norm * st.norm);

  // d rho / d pred_i = t~_i / (|p~||t~|) - rho * p~_i / |p~|^2.
  // Both centered series sum to zero, so the gradient already sums to zero.
  std::vector<double> g(pred.size());
  double inv_pt = 1.0 / (sp.norm * st.norm);
  double inv_pp = rho / (sp.norm * sp.norm);
  for (std::size_t i = 0; i < pred.size(); ++i)
    g[i] = (target[i] - st.mean) * inv_pt - (pred[i] - sp.mean) * inv_pp;
  return g;
}

WindowedScore windowed_accuracy(std::span<const double> pred,
                                std::span<const double> att,
                                const std::vector<std::span<const double>>& unatt,
                                double sample_rate_hz, const EvalWindowing& w) {
  if (pred.size() != att.size())
    throw LengthMismatch("pred/att lengths differ");
  for (const auto& u : unatt)
    if (u.size() != pred.size())
      throw LengthMismatch("competitor length differs from pred");
  if (unatt.empty())
    throw LengthMismatch("windowed_accuracy needs at least one competitor");

  auto win = static_cast<std::size_t>(w.window_seconds * sample_rate_hz);
  if (win < 2) throw NoFullWindow("window shorter than 2 samples");
  if (pred.size() < win)
    throw NoFullWindow("series shorter than one decision window");

  WindowedScore s;
  std::size_t n_windows = pred.size() / win;
  for (std::size_t k = 0; k < n_windows; ++k) {
    std::size_t off = k * win;
    auto pw = pred.subspan(off, win);
    auto aw = att.subspan(off, win);
    bool degenerate = is_constant(pw) || is_constant(aw);
    for (const auto& u : unatt)
      degenerate = degenerate || is_constant(u.subspan(off, win));
    if (degenerate) {
      ++s.windows_skipped;
      continue;
    }
    double ra = pearson(pw, aw);
    bool correct = true;
    for (const auto& u : unatt) {
      double ru = pearson(pw, u.subspan(off, win));
      s.sum_rho_u += ru;
      ++s.competitor_terms;
      if (!(ra > ru)) correct = false;  // ties count as incorrect
    }
    s.sum_rho_a += ra;
    s.sum_correct += correct ? 1.0 : 0.0;
    ++s.windows_used;
  }
  if (s.windows_used == 0 && s.windows_skipped == 0)
    throw NoFullWindow("no evaluable window");

  if (s.windows_used > 0) {
    s.acc = s.sum_correct / static_cast<double>(s.windows_used);
    s.rho_a = s.sum_rho_a / static_cast<double>(s.windows_used);
    s.rho_u = s.sum_rho_u / static_cast<double>(s.competitor_terms);
  }
  return s;
}

WindowedScore pool_scores(const std::vector<WindowedScore>& parts) {
  WindowedScore s;
  for (const auto& p : parts) {
    s.sum_correct += p.sum_correct;
    s.sum_rho_a += p.sum_rho_a;
    s.sum_rho_u += p.sum_rho_u;
    s.windows_used += p.windows_used;
    s.windows_skipped += p.windows_skipped;
    s.competitor_terms += p.competitor_terms;
  }
  if (s.windows_used > 0) {
    s.acc = s.sum_correct / static_cast<double>(s.windows_used);
    s.rho_a = s.sum_rho_a / static_cast<double>(s.windows_used);
    s.rho_u = s.sum_rho_u / static_cast<double>(s.competitor_terms);
  }
  return s;
}

}  // namespace aad
