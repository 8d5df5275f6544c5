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

#include "aad/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "aad/errors.hpp"

namespace aad {
namespace {

constexpr int kExactLimit = 12;

// Average ranks of |d|, ties shared.
std::vector<double> average_ranks(const std::vector<double>& abs_d) {
  std::size_t n = abs_d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return abs_d[i] < abs_d[j]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.size() != b.size())
    throw LengthMismatch("paired samples must have equal length");

  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    if (diff != 0.0) d.push_back(diff);
  }
  if (d.empty()) throw AllZeroDifferences("all paired differences are zero");
  if (d.size() < 5)
    throw TooFewPairs("need at least 5 non-zero differences, have " +
                      std::to_string(d.size()));

  std::vector<double> abs_d(d.size());
  std::transform(d.begin(), d.end(), abs_d.begin(),
                 [](double x) { return std::abs(x); });
  std::vector<double> ranks = average_ranks(abs_d);

  double w_plus = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > 0.0) w_plus += ranks[i];

  WilcoxonResult res;
  res.statistic = w_plus;
  res.n = static_cast<int>(d.size());

  int n = res.n;
  if (n <= kExactLimit) {
    // Exact: enumerate every sign assignment over the realized rank values.
    std::uint64_t total = 1ULL << n;
    std::uint64_t le = 0, ge = 0;
    const double eps = 1e-9;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      double t = 0.0;
      for (int i = 0; i < n; ++i)
        if (mask & (1ULL << i)) t += ranks[static_cast<std::size_t>(i)];
      if (t <= w_plus + eps) ++le;
      if (t >= w_plus - eps) ++ge;
    }
    double p = 2.0 * static_cast<double>(std::min(le, ge)) /
               static_cast<double>(total);
    res.p_two_sided = std::min(1.0, p);
    res.exact = true;
  } else {
    // Normal approximation with tie correction.
    double mean = n * (n + 1) / 4.0;
    double var = n * (n + 1) * (2.0 * n + 1) / 24.0;
    std::vector<double> sorted = abs_d;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      double t = static_cast<double>(j - i + 1);
      var -= (t * t * t - t) / 48.0;
      i = j + 1;
    }
    double z = (w_plus - mean) / std::sqrt(var);
    res.p_two_sided = std::erfc(std::abs(z) / std::sqrt(2.0));
    res.exact = false;
  }
  return res;
}

std::vector<double> bonferroni_adjust(std::span<const double> p_values, int m) {
  if (m < static_cast<int>(p_values.size()))
    throw InvalidPValue("m must be at least the number of p-values");
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    if (p < 0.0 || p > 1.0)
      throw InvalidPValue("p-value outside [0, 1]: " + std::to_string(p));
    out.push_back(std::min(1.0, m * p));
  }
  return out;
}

}  // namespace aad
