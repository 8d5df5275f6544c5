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

#ifndef AAD_DATASET_HPP_
#define AAD_DATASET_HPP_

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aad {

// Opaque stimulus identifier. Non-empty; '|' is reserved as the pair / list
// separator in the CSV format and is therefore forbidden inside ids.
class StimulusId {
 public:
  StimulusId() = default;
  explicit StimulusId(std::string id);

  const std::string& str() const { return id_; }

  auto operator<=>(const StimulusId&) const = default;

 private:
  std::string id_;
};

// Canonically ordered unordered pair of stimuli: first <= second under
// lexicographic order on the raw id text.
struct StimulusPair {
  StimulusId first;
  StimulusId second;

  // Encoding used in fold manifests and audit reports, e.g. "A|B".
  std::string encode() const { return first.str() + "|" + second.str(); }

  auto operator<=>(const StimulusPair&) const = default;
};

// Order-insensitive pair constructor. Throws InvalidPair when a == b: a
// stimulus cannot compete with itself.
StimulusPair canonical_pair(const StimulusId& a, const StimulusId& b);

// Metadata of one EEG trial. Immutable after construction.
struct TrialRecord {
  std::string trial_id;
  std::string subject_id;
  StimulusId attended;
  std::vector<StimulusId> unattended;  // length >= 1, pairwise distinct
  std::optional<std::string> eeg_ref;
  std::map<StimulusId, std::string> envelope_refs;

  int speaker_count() const { return 1 + static_cast<int>(unattended.size()); }
};

struct Dataset {
  std::string name;
  std::vector<TrialRecord> trials;
};

enum class ValidationSeverity { kError, kWarning };

struct ValidationIssue {
  ValidationSeverity severity;
  std::string trial_id;  // empty for dataset-level issues
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const;  // true iff no kError entries
  std::size_t error_count() const;
  std::size_t warning_count() const;
};

// Parses trial metadata. CSV columns:
//   trial_id,subject_id,attended_stimulus,unattended_stimuli
// where unattended_stimuli joins ids with '|'. The JSON form is an array of
// objects with the same field names (unattended_stimuli as array). Optional
// CSV columns eeg_ref and envelope_refs ("S1=path|S2=path") carry signal
// file references. All TrialRecord invariants are validated; violations are
// reported with line / field location via ParseError.
Dataset parse_trial_metadata_csv(std::istream& in, const std::string& name);
Dataset parse_trial_metadata_json(std::istream& in, const std::string& name);

// Dispatches on file extension (.csv / .json).
Dataset load_trial_metadata(const std::string& path);

void write_trial_metadata_csv(const Dataset& d, std::ostream& out);
void write_trial_metadata_json(const Dataset& d, std::ostream& out);

// Reports invariant violations without throwing. `require_signals` adds
// errors for trials missing eeg/envelope references (used by commands that
// need the actual recordings).
ValidationReport validate_dataset(const Dataset& d, bool require_signals = false);

}  // namespace aad

#endif  // AAD_DATASET_HPP_
