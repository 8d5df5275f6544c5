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

#include "aad/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "aad/errors.hpp"
#include "nlohmann/json.hpp"

namespace aad {
namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void check_trial_invariants(const TrialRecord& t, const std::string& where) {
  if (t.trial_id.empty()) throw ParseError(where + ": empty trial_id");
  if (t.subject_id.empty()) throw ParseError(where + ": empty subject_id");
  if (t.unattended.empty())
    throw ParseError(where + ": trial '" + t.trial_id +
                     "' has no unattended stimuli");
  std::set<StimulusId> seen;
  for (const auto& u : t.unattended) {
    if (u == t.attended)
      throw ParseError(where + ": trial '" + t.trial_id +
                       "': attended stimulus '" + u.str() +
                       "' also listed as unattended (AttendedAmongUnattended)");
    if (!seen.insert(u).second)
      throw ParseError(where + ": trial '" + t.trial_id +
                       "': duplicate unattended stimulus '" + u.str() + "'");
  }
}

void check_unique_trial_ids(const Dataset& d, const std::string& where) {
  std::set<std::string> ids;
  for (const auto& t : d.trials) {
    if (!ids.insert(t.trial_id).second)
      throw ParseError(where + ": duplicate trial_id '" + t.trial_id + "'");
  }
}

}  // namespace

StimulusId::StimulusId(std::string id) : id_(std::move(id)) {
  if (id_.empty()) throw InvalidStimulusId("stimulus id must be non-empty");
  if (id_.find('|') != std::string::npos)
    throw InvalidStimulusId("stimulus id '" + id_ +
                            "' contains reserved character '|'");
}

StimulusPair canonical_pair(const StimulusId& a, const StimulusId& b) {
  if (a == b)
    throw InvalidPair("stimulus '" + a.str() + "' cannot compete with itself");
  return a < b ? StimulusPair{a, b} : StimulusPair{b, a};
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(), [](const auto& i) {
        return i.severity == ValidationSeverity::kError;
      }));
}

std::size_t ValidationReport::warning_count() const {
  return issues.size() - error_count();
}

Dataset parse_trial_metadata_csv(std::istream& in, const std::string& name) {
  Dataset d;
  d.name = name;

  std::string line;
  if (!std::getline(in, line)) throw ParseError(name + ": empty file");
  auto header = split(strip(line), ',');
  if (header.size() < 4 || header[0] != "trial_id" ||
      header[1] != "subject_id" || header[2] != "attended_stimulus" ||
      header[3] != "unattended_stimuli")
    throw ParseError(name + ": line 1: unexpected CSV header");
  int eeg_col = -1, env_col = -1;
  for (std::size_t i = 4; i < header.size(); ++i) {
    if (header[i] == "eeg_ref") eeg_col = static_cast<int>(i);
    else if (header[i] == "envelope_refs") env_col = static_cast<int>(i);
    else throw ParseError(name + ": line 1: unknown column '" + header[i] + "'");
  }

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = name + ": line " + std::to_string(lineno);
    if (strip(line).empty()) continue;
    auto fields = split(strip(line), ',');
    if (fields.size() < 4)
      throw ParseError(where + ": expected at least 4 fields, got " +
                       std::to_string(fields.size()));

    TrialRecord t;
    t.trial_id = strip(fields[0]);
    t.subject_id = strip(fields[1]);
    try {
      t.attended = StimulusId(strip(fields[2]));
      for (const auto& u : split(strip(fields[3]), '|'))
        t.unattended.emplace_back(strip(u));
    } catch (const InvalidStimulusId& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (eeg_col >= 0 && static_cast<int>(fields.size()) > eeg_col &&
        !strip(fields[eeg_col]).empty())
      t.eeg_ref = strip(fields[eeg_col]);
    if (env_col >= 0 && static_cast<int>(fields.size()) > env_col &&
        !strip(fields[env_col]).empty()) {
      for (const auto& kv : split(strip(fields[env_col]), '|')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw ParseError(where + ": malformed envelope_refs entry '" + kv + "'");
        t.envelope_refs[StimulusId(kv.substr(0, eq))] = kv.substr(eq + 1);
      }
    }
    check_trial_invariants(t, where);
    d.trials.push_back(std::move(t));
  }
  check_unique_trial_ids(d, name);
  return d;
}

Dataset parse_trial_metadata_json(std::istream& in, const std::string& name) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(name + ": invalid JSON: " + e.what());
  }
  if (!j.is_array()) throw ParseError(name + ": expected a JSON array");

  Dataset d;
  d.name = name;
  int idx = 0;
  for (const auto& o : j) {
    ++idx;
    std::string where = name + ": object " + std::to_string(idx);
    try {
      TrialRecord t;
      t.trial_id = o.at("trial_id").get<std::string>();
      t.subject_id = o.at("subject_id").get<std::string>();
      t.attended = StimulusId(o.at("attended_stimulus").get<std::string>());
      for (const auto& u : o.at("unattended_stimuli"))
        t.unattended.emplace_back(u.get<std::string>());
      if (o.contains("eeg_ref")) t.eeg_ref = o["eeg_ref"].get<std::string>();
      if (o.contains("envelope_refs"))
        for (const auto& [k, v] : o["envelope_refs"].items())
          t.envelope_refs[StimulusId(k)] = v.get<std::string>();
      check_trial_invariants(t, where);
      d.trials.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const InvalidStimulusId& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  check_unique_trial_ids(d, name);
  return d;
}

Dataset load_trial_metadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metadata file: " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return parse_trial_metadata_json(in, path);
  return parse_trial_metadata_csv(in, path);
}

void write_trial_metadata_csv(const Dataset& d, std::ostream& out) {
  bool any_refs = std::any_of(d.trials.begin(), d.trials.end(), [](const auto& t) {
    return t.eeg_ref.has_value() || !t.envelope_refs.empty();
  });
  out << "trial_id,subject_id,attended_stimulus,unattended_stimuli";
  if (any_refs) out << ",eeg_ref,envelope_refs";
  out << "\n";
  for (const auto& t : d.trials) {
    out << t.trial_id << "," << t.subject_id << "," << t.attended.str() << ",";
    for (std::size_t i = 0; i < t.unattended.size(); ++i)
      out << (i ? "|" : "") << t.unattended[i].str();
    if (any_refs) {
      out << "," << t.eeg_ref.value_or("") << ",";
      bool first = true;
      for (const auto& [k, v] : t.envelope_refs) {
        out << (first ? "" : "|") << k.str() << "=" << v;
        first = false;
      }
    }
    out << "\n";
  }
}

void write_trial_metadata_json(const Dataset& d, std::ostream& out) {
  json arr = json::array();
  for (const auto& t : d.trials) {
    json o;
    o["trial_id"] = t.trial_id;
    o["subject_id"] = t.subject_id;
    o["attended_stimulus"] = t.attended.str();
    json un = json::array();
    for (const auto& u : t.unattended) un.push_back(u.str());
    o["unattended_stimuli"] = un;
    if (t.eeg_ref) o["eeg_ref"] = *t.eeg_ref;
    if (!t.envelope_refs.empty()) {
      json refs;
      for (const auto& [k, v] : t.envelope_refs) refs[k.str()] = v;
      o["envelope_refs"] = refs;
    }
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << "\n";
}

ValidationReport validate_dataset(const Dataset& d, bool require_signals) {
  ValidationReport r;
  if (d.trials.empty()) {
    r.issues.push_back({ValidationSeverity::kError, "", "dataset is empty"});
    return r;
  }

  std::set<std::string> ids;
  std::set<int> speaker_counts;
  for (const auto& t : d.trials) {
    if (!ids.insert(t.trial_id).second)
      r.issues.push_back({ValidationSeverity::kError, t.trial_id,
                          "duplicate trial_id"});
    speaker_counts.insert(t.speaker_count());
    for (const auto& u : t.unattended)
      if (u == t.attended)
        r.issues.push_back({ValidationSeverity::kError, t.trial_id,
                            "attended stimulus also listed as unattended"});
    if (require_signals) {
      if (!t.eeg_ref)
        r.issues.push_back({ValidationSeverity::kError, t.trial_id,
                            "missing eeg_ref"});
      auto need = [&](const StimulusId& s) {
        if (!t.envelope_refs.count(s))
          r.issues.push_back({ValidationSeverity::kError, t.trial_id,
                              "missing envelope_ref for stimulus '" + s.str() +
                                  "'"});
      };
      need(t.attended);
      for (const auto& u : t.unattended) need(u);
    }
  }
  if (speaker_counts.size() > 1) {
    std::ostringstream msg;
    msg << "mixed speaker counts across trials:";
    for (int n : speaker_counts) msg << " " << n;
    r.issues.push_back({ValidationSeverity::kWarning, "", msg.str()});
  }
  return r;
}

}  // namespace aad
