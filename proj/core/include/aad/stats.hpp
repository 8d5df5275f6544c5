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

#ifndef AAD_STATS_HPP_
#define AAD_STATS_HPP_

#include <span>
#include <vector>

namespace aad {

struct WilcoxonResult {
  double statistic = 0.0;  // W+ = rank sum of positive differences
  double p_two_sided = 1.0;
  int n = 0;  // pairs after dropping zero differences
  bool exact = false;
};

// Two-sided paired Wilcoxon signed-rank test. Zero differences are dropped;
// at least 5 pairs must remain. Tied |differences| get average ranks. For
// n <= 12 the p-value is exact (full 2^n sign enumeration over the realized
// ranks); beyond that a normal approximation with tie correction is used.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                    std::span<const double> b);

// Bonferroni correction: p' = min(1, m * p). m must be at least the number
// of p-values.
std::vector<double> bonferroni_adjust(std::span<const double> p_values, int m);

}  // namespace aad

#endif  // AAD_STATS_HPP_
