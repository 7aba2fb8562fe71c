// Copyright 2026 The Sincere Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Executable checks for the common ways published end-to-end RE scores end
// up incomparable: mixed criteria, micro vs macro averaging, different type
// inventories, splits or training data, and metrics that average NER and RE.

#ifndef SINCERE_AUDIT_HPP_
#define SINCERE_AUDIT_HPP_

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sincere/core_model.hpp"
#include "sincere/ingest.hpp"
#include "sincere/scoring.hpp"

namespace sincere {

enum class Task { kNer, kRe };

inline const char *TaskName(Task t) { return t == Task::kNer ? "NER" : "RE"; }

inline std::optional<Task> ParseTask(std::string_view text) {
  std::string s = internal::Lower(text);
  if (s == "ner") return Task::kNer;
  if (s == "re") return Task::kRe;
  return std::nullopt;
}

// A published score together with the evaluation setting it claims.
// Unset optionals mean the source leaves the field unspecified.
struct ResultClaim {
  std::string label;
  Task task = Task::kRe;
  double value = 0.0;  // in [0, 1]
  std::optional<CriterionKind> claimed_setting;
  std::optional<Average> claimed_average;
  std::string dataset;
  std::optional<std::string> split;
  bool train_dev = false;
  std::set<std::string> excluded_entity_types;
  // Setting the source itself announced, when it differs from the one the
  // result was actually computed under.
  std::optional<CriterionKind> reported_as;
};

namespace reason {
inline constexpr const char *kInsufficientlySpecified = "insufficiently_specified";
inline constexpr const char *kTaskMismatch = "task_mismatch";
inline constexpr const char *kDatasetMismatch = "dataset_mismatch";
inline constexpr const char *kSplitMismatch = "split_mismatch";
inline constexpr const char *kTrainDevMismatch = "train_dev_mismatch";
inline constexpr const char *kSettingMismatch = "setting_mismatch";
inline constexpr const char *kAverageMismatch = "average_mismatch";
inline constexpr const char *kTypeSetMismatch = "type_set_mismatch";
}  // namespace reason

struct ComparisonVerdict {
  bool comparable = true;
  std::vector<std::string> reasons;

  bool Has(std::string_view r) const {
    for (const std::string &x : reasons)
      if (x == r) return true;
    return false;
  }
};

inline ComparisonVerdict CompareClaims(const ResultClaim &a,
                                       const ResultClaim &b) {
  ComparisonVerdict v;
  auto add = [&](const char *r) {
    if (!v.Has(r)) v.reasons.emplace_back(r);
  };
  if (!a.claimed_setting || !b.claimed_setting || !a.claimed_average ||
      !b.claimed_average || a.split.has_value() != b.split.has_value()) {
    add(reason::kInsufficientlySpecified);
  }
  if (a.task != b.task) add(reason::kTaskMismatch);
  if (a.dataset != b.dataset) add(reason::kDatasetMismatch);
  if (a.split && b.split && *a.split != *b.split) add(reason::kSplitMismatch);
  if (a.train_dev != b.train_dev) add(reason::kTrainDevMismatch);
  if (a.claimed_setting && b.claimed_setting &&
      *a.claimed_setting != *b.claimed_setting) {
    add(reason::kSettingMismatch);
  }
  if (a.claimed_average && b.claimed_average &&
      *a.claimed_average != *b.claimed_average) {
    add(reason::kAverageMismatch);
  }
  if (a.excluded_entity_types != b.excluded_entity_types) {
    add(reason::kTypeSetMismatch);
  }
  v.comparable = v.reasons.empty();
  return v;
}

// ---------------------------------------------------------------------------
// Strict vs Boundaries gap

struct GapReport {
  double strict_f1 = 0.0;
  double boundaries_f1 = 0.0;
  double absolute_gap = 0.0;
  // absolute_gap / strict_f1; unset when strict_f1 is 0.
  std::optional<double> relative_overestimation;
};

inline GapReport GapFromScores(double strict_f1, double boundaries_f1) {
  GapReport g{strict_f1, boundaries_f1, boundaries_f1 - strict_f1,
              std::nullopt};
  if (strict_f1 > 0.0) g.relative_overestimation = g.absolute_gap / strict_f1;
  return g;
}

// RE F1 under Strict and Boundaries, with the rest of `config` unchanged.
inline GapReport Gap(const Corpus &gold, const Corpus &pred,
                     const ScoreConfig &config) {
  std::set<std::string> re_types = RelationTypes(gold);
  for (const std::string &t : config.excluded_relation_types) re_types.erase(t);
  if (re_types.empty()) throw ScoringError("no scorable annotations");
  ScoreConfig strict = config;
  strict.criterion.kind = CriterionKind::kStrict;
  ScoreConfig bounds = config;
  bounds.criterion.kind = CriterionKind::kBoundaries;
  return GapFromScores(Score(gold, pred, strict).re.total.f1,
                       Score(gold, pred, bounds).re.total.f1);
}

// ---------------------------------------------------------------------------
// Setting fingerprinting

inline constexpr double kDefaultFingerprintTolerance = 0.0005;

struct FingerprintResult {
  std::map<CriterionKind, double> computed;
  std::set<CriterionKind> consistent;
  bool mismatch_with_claim = false;
  // "consistent", "mismatch", "indeterminate" (every setting fits) or
  // "unmatched" (none does).
  std::string verdict;
};

// Which criteria reproduce the claimed value on these files?
inline FingerprintResult FingerprintSetting(const Corpus &gold,
                                            const Corpus &pred,
                                            const ResultClaim &claim,
                                            double tolerance,
                                            const ScoreConfig &base = {}) {
  if (!(tolerance >= 0.0)) throw Error("tolerance must be non-negative");
  ScoreConfig config = base;
  if (claim.claimed_average) config.average = *claim.claimed_average;
  if (!claim.excluded_entity_types.empty())
    config.excluded_entity_types = claim.excluded_entity_types;
  FingerprintResult r;
  for (const auto &[kind, report] : ScoreAllSettings(gold, pred, config)) {
    const double f1 =
        claim.task == Task::kNer ? report.ner.total.f1 : report.re.total.f1;
    r.computed[kind] = f1;
    if (std::abs(f1 - claim.value) <= tolerance) r.consistent.insert(kind);
  }
  r.mismatch_with_claim = claim.claimed_setting.has_value() &&
                          !r.consistent.contains(*claim.claimed_setting);
  if (r.consistent.size() == kAllCriteria.size()) {
    r.verdict = "indeterminate";
  } else if (r.consistent.empty()) {
    r.verdict = "unmatched";
  } else if (r.mismatch_with_claim) {
    r.verdict = "mismatch";
  } else {
    r.verdict = "consistent";
  }
  return r;
}

struct DiscouragedMetric {
  double value = 0.0;
  bool discouraged = true;
};

// Mean of NER and RE F1. Always flagged: NER quality is already part of
// the end-to-end RE score.
inline DiscouragedMetric NerReAverage(const EvalReport &report) {
  return {(report.ner.total.f1 + report.re.total.f1) / 2.0, true};
}

// ---------------------------------------------------------------------------
// Claims files: a JSON array of claim records.

inline ResultClaim ClaimFromJson(const nlohmann::json &j, std::size_t index) {
  const std::string where = "claims[" + std::to_string(index) + "]";
  auto fail = [&](const std::string &what) -> void {
    throw IngestError(IngestError::Kind::kSchema, where + ": " + what);
  };
  if (!j.is_object()) fail("expected object");
  ResultClaim c;
  c.label = j.value("label", "");
  auto task = ParseTask(j.value("task", ""));
  if (!task) fail("task must be NER or RE");
  c.task = *task;
  if (!j.contains("value") || !j["value"].is_number()) fail("missing value");
  c.value = j["value"].get<double>();
  if (c.value > 1.0) c.value /= 100.0;  // percentages
  if (!(c.value >= 0.0 && c.value <= 1.0)) fail("value out of range");
  const std::string setting = j.value("setting", "unknown");
  if (setting != "unknown") {
    c.claimed_setting = ParseCriterion(setting);
    if (!c.claimed_setting) fail("unknown setting \"" + setting + "\"");
  }
  const std::string average = j.value("average", "unknown");
  if (average != "unknown") {
    c.claimed_average = ParseAverage(average);
    if (!c.claimed_average) fail("unknown average \"" + average + "\"");
  }
  c.dataset = j.value("dataset", "");
  if (j.contains("split") && !j["split"].is_null())
    c.split = j["split"].get<std::string>();
  c.train_dev = j.value("train_dev", false);
  c.excluded_entity_types =
      j.value("excluded_entity_types", std::set<std::string>{});
  if (j.contains("reported_as") && !j["reported_as"].is_null()) {
    c.reported_as = ParseCriterion(j["reported_as"].get<std::string>());
  }
  return c;
}

inline std::vector<ResultClaim> ParseClaims(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error &e) {
    throw IngestError(IngestError::Kind::kSyntax,
                      std::string("claims: ") + e.what());
  }
  if (!j.is_array()) {
    throw IngestError(IngestError::Kind::kSchema, "claims: expected array");
  }
  std::vector<ResultClaim> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(ClaimFromJson(j[i], i));
  return out;
}

inline std::vector<ResultClaim> ReadClaimsFile(const std::string &path) {
  return ParseClaims(SlurpFile(path));
}

inline void to_json(nlohmann::json &j, const ResultClaim &c) {
  j = {{"label", c.label},
       {"task", TaskName(c.task)},
       {"value", c.value},
       {"setting", c.claimed_setting ? CriterionName(*c.claimed_setting)
                                     : "unknown"},
       {"average", c.claimed_average ? AverageName(*c.claimed_average)
                                     : "unknown"},
       {"dataset", c.dataset},
       {"train_dev", c.train_dev},
       {"excluded_entity_types", c.excluded_entity_types}};
  j["split"] = c.split ? nlohmann::json(*c.split) : nlohmann::json(nullptr);
  if (c.reported_as) j["reported_as"] = CriterionName(*c.reported_as);
}

inline void to_json(nlohmann::json &j, const ComparisonVerdict &v) {
  j = {{"comparable", v.comparable}, {"reasons", v.reasons}};
}

inline void to_json(nlohmann::json &j, const GapReport &g) {
  j = {{"strict_f1", g.strict_f1},
       {"boundaries_f1", g.boundaries_f1},
       {"absolute_gap", g.absolute_gap}};
  j["relative_overestimation"] =
      g.relative_overestimation ? nlohmann::json(*g.relative_overestimation)
                                : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json &j, GapReport &g) {
  j.at("strict_f1").get_to(g.strict_f1);
  j.at("boundaries_f1").get_to(g.boundaries_f1);
  j.at("absolute_gap").get_to(g.absolute_gap);
  const auto &rel = j.at("relative_overestimation");
  g.relative_overestimation =
      rel.is_null() ? std::nullopt : std::optional<double>(rel.get<double>());
}

inline void to_json(nlohmann::json &j, const FingerprintResult &r) {
  nlohmann::json computed = nlohmann::json::object();
  for (const auto &[k, v] : r.computed) computed[CriterionName(k)] = v;
  nlohmann::json consistent = nlohmann::json::array();
  for (CriterionKind k : r.consistent) consistent.push_back(CriterionName(k));
  j = {{"computed", computed},
       {"consistent", consistent},
       {"mismatch_with_claim", r.mismatch_with_claim},
       {"verdict", r.verdict}};
}

}  // namespace sincere

#endif  // SINCERE_AUDIT_HPP_
