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

#ifndef AAD_MEMORIZING_HPP_
#define AAD_MEMORIZING_HPP_

#include <map>
#include <vector>

#include "aad/dataset.hpp"
#include "aad/decoder.hpp"
#include "aad/partition.hpp"

namespace aad {

// Models a high-capacity decoder that memorizes training-set attended
// envelopes and substitutes a recognized envelope for its own estimate -
// the stimulus-identity-leakage failure mode. Stored envelopes come
// exclusively from the training partition.
struct MemorizingDecoder {
  LinearDecoder base;
  std::map<StimulusId, std::vector<double>> stored_envelopes;
  double blend_alpha = 0.85;
  double match_threshold = 0.0;
  // Recognition granularity; matches the decision-window length so each
  // decision can be hijacked independently.
  double window_seconds = 10.0;
};

// Stores the attended envelope of every training-partition trial. When the
// partition passes the pair-leakage audit, the stored key set is checked to
// be disjoint from every test trial's stimuli (violations indicate a broken
// partition and raise PlanMismatch). Throws MissingEnvelope when a training
// trial's attended envelope is absent or the training partition is empty.
MemorizingDecoder build_memorizing_decoder(
    LinearDecoder base, const Partition& partition, const Dataset& dataset,
    const std::map<StimulusId, std::vector<double>>& envelopes, double alpha,
    double threshold);

// Linear reconstruction, then envelope recognition per non-overlapping
// window of window_seconds: the stored envelope with maximal correlation to
// the linear estimate over that window, if above the match threshold, is
// blended in as alpha*matched + (1-alpha)*linear (both standardized per
// window). Unmatched windows and the trailing partial window keep the
// linear estimate.
Reconstruction reconstruct_with_memory(const MemorizingDecoder& dec,
                                       const SignalSeries& eeg);

}  // namespace aad

#endif  // AAD_MEMORIZING_HPP_
