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

// Precision / recall / F1 for end-to-end relation extraction.
//
// Matching criteria for a predicted relation against a gold relation (the
// relation type must always be equal):
//
//   Strict      both arguments match in boundaries and entity type.
//   Boundaries  both arguments match in boundaries; entity types ignored.
//   LastToken   only the last token index of each argument has to match;
//               entity types ignored. Looser than Boundaries. Diagnostic
//               only: it reproduces a published evaluation bug.
//   Relaxed     each predicted argument overlaps the gold argument by at
//               least one token and carries its entity type.
//
// NER is always typed. Under Strict, Boundaries and LastToken it is exact
// typed-span matching; under Relaxed a gold mention counts as found when a
// predicted mention of the same type shares at least one token with it.
//
// Annotations are deduplicated on their typed identity before counting.
// Under Boundaries and LastToken, gold and predicted relations fall into
// equivalence classes of the looser key and each class contributes
// min(#gold, #pred) true positives, so every Strict true positive is also a
// Boundaries true positive and every Boundaries true positive is also a
// LastToken one.

#ifndef SINCERE_SCORING_HPP_
#define SINCERE_SCORING_HPP_

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sincere/core_model.hpp"
#include "sincere/ingest.hpp"

namespace sincere {

enum class CriterionKind { kStrict, kBoundaries, kRelaxed, kLastToken };

inline constexpr std::array<CriterionKind, 4> kAllCriteria = {
    CriterionKind::kStrict, CriterionKind::kBoundaries, CriterionKind::kRelaxed,
    CriterionKind::kLastToken};

inline const char *CriterionName(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::kStrict: return "Strict";
    case CriterionKind::kBoundaries: return "Boundaries";
    case CriterionKind::kRelaxed: return "Relaxed";
    case CriterionKind::kLastToken: return "LastToken";
  }
  return "Unknown";
}

namespace internal {

inline std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace internal

// Case-insensitive; accepts "last-token" and "last_token" too.
inline std::optional<CriterionKind> ParseCriterion(std::string_view text) {
  std::string s = internal::Lower(text);
  std::erase_if(s, [](char c) { return c == '-' || c == '_'; });
  if (s == "strict") return CriterionKind::kStrict;
  if (s == "boundaries" || s == "boundary") return CriterionKind::kBoundaries;
  if (s == "relaxed") return CriterionKind::kRelaxed;
  if (s == "lasttoken") return CriterionKind::kLastToken;
  return std::nullopt;
}

struct Criterion {
  CriterionKind kind = CriterionKind::kStrict;

  bool diagnostic() const { return kind == CriterionKind::kLastToken; }
  friend bool operator==(const Criterion &, const Criterion &) = default;
};

enum class Average { kMicro, kMacro };

inline const char *AverageName(Average a) {
  return a == Average::kMicro ? "micro" : "macro";
}

inline std::optional<Average> ParseAverage(std::string_view text) {
  std::string s = internal::Lower(text);
  if (s == "micro") return Average::kMicro;
  if (s == "macro") return Average::kMacro;
  return std::nullopt;
}

struct ScoreConfig {
  Criterion criterion;
  Average average = Average::kMicro;
  std::set<std::string> excluded_entity_types;
  std::set<std::string> excluded_relation_types;
  std::set<std::string> symmetric_types;
  // Score even when gold and prediction sentences do not align.
  bool allow_misaligned = false;

  friend bool operator==(const ScoreConfig &, const ScoreConfig &) = default;
};

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  Counts &operator+=(const Counts &o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const Counts &, const Counts &) = default;
};

using TypeCounts = std::map<std::string, Counts>;

inline void Merge(TypeCounts &into, const TypeCounts &from) {
  for (const auto &[type, c] : from) into[type] += c;
}

inline double SafeRatio(double num, double den) {
  return den == 0.0 ? 0.0 : num / den;
}

struct PRF {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static PRF FromCounts(const Counts &c) {
    PRF r{c.tp, c.fp, c.fn, 0.0, 0.0, 0.0};
    r.precision = SafeRatio(static_cast<double>(c.tp),
                            static_cast<double>(c.tp + c.fp));
    r.recall = SafeRatio(static_cast<double>(c.tp),
                         static_cast<double>(c.tp + c.fn));
    r.f1 = SafeRatio(2.0 * r.precision * r.recall, r.precision + r.recall);
    return r;
  }
  friend bool operator==(const PRF &, const PRF &) = default;
};

struct TaskReport {
  PRF total;
  std::map<std::string, PRF> per_type;
  // Types predicted but absent from gold (after exclusions). They add FP to
  // micro totals but never enter a macro average.
  std::vector<std::string> spurious_types;
  friend bool operator==(const TaskReport &, const TaskReport &) = default;
};

struct EvalReport {
  ScoreConfig config;
  TaskReport ner;
  TaskReport re;
  // Relaxed RE is an extension beyond the published definitions and
  // LastToken is diagnostic; both are flagged.
  bool non_standard = false;
  std::vector<std::string> warnings;
  friend bool operator==(const EvalReport &, const EvalReport &) = default;
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(AlignmentReport report)
      : Error("gold and prediction are not aligned (" +
              std::to_string(report.mismatches.size()) + " mismatches)"),
        report_(std::move(report)) {}
  const AlignmentReport &report() const { return report_; }

 private:
  AlignmentReport report_;
};

class ScoringError : public Error {
 public:
  using Error::Error;
};

namespace internal {

struct Arg {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;
  friend auto operator<=>(const Arg &, const Arg &) = default;
};

struct Rel {
  std::string type;
  Arg head;
  Arg tail;
  friend auto operator<=>(const Rel &, const Rel &) = default;
};

struct SentencePair {
  const Sentence *gold = nullptr;
  const Sentence *pred = nullptr;
};

// Pairs sentences of the two corpora by (doc_key, index); unmatched ones
// are paired with nullptr.
inline std::vector<SentencePair> PairSentences(const Corpus &gold,
                                               const Corpus &pred) {
  std::map<std::pair<std::string, std::size_t>, SentencePair> pairs;
  for (const Document &d : gold.docs)
    for (std::size_t s = 0; s < d.sentences.size(); ++s)
      pairs[{d.doc_key, s}].gold = &d.sentences[s];
  for (const Document &d : pred.docs)
    for (std::size_t s = 0; s < d.sentences.size(); ++s)
      pairs[{d.doc_key, s}].pred = &d.sentences[s];
  std::vector<SentencePair> out;
  out.reserve(pairs.size());
  for (auto &[key, p] : pairs) out.push_back(p);
  return out;
}

inline std::set<Arg> TypedMentions(const Sentence *sent,
                                   const std::set<std::string> &excluded) {
  std::set<Arg> out;
  if (sent == nullptr) return out;
  for (const Mention &m : sent->entities) {
    if (!excluded.contains(m.type)) out.insert({m.start, m.end, m.type});
  }
  return out;
}

inline std::set<Rel> TypedRelations(const Sentence *sent,
                                    const std::set<std::string> &symmetric,
                                    const std::set<std::string> &excluded) {
  std::set<Rel> out;
  if (sent == nullptr) return out;
  for (const RelationMention &r : sent->relations) {
    if (excluded.contains(r.type)) continue;
    const Mention *h = sent->FindEntity(r.head);
    const Mention *t = sent->FindEntity(r.tail);
    Rel rel{r.type, {h->start, h->end, h->type}, {t->start, t->end, t->type}};
    if (symmetric.contains(r.type) && rel.tail < rel.head) {
      std::swap(rel.head, rel.tail);
    }
    out.insert(std::move(rel));
  }
  return out;
}

inline bool Overlap(const Arg &a, const Arg &b) {
  return a.start < b.end && b.start < a.end;
}

// Looser-than-Strict identity of a relation.
using ReducedArg = std::pair<std::size_t, std::size_t>;
using ReducedRel = std::tuple<std::string, ReducedArg, ReducedArg>;

inline ReducedArg Reduce(const Arg &a, CriterionKind kind) {
  if (kind == CriterionKind::kLastToken) return {a.end - 1, a.end - 1};
  return {a.start, a.end};
}

inline ReducedRel ReduceRel(const Rel &r, CriterionKind kind,
                            const std::set<std::string> &symmetric) {
  ReducedArg h = Reduce(r.head, kind);
  ReducedArg t = Reduce(r.tail, kind);
  if (symmetric.contains(r.type) && t < h) std::swap(h, t);
  return {r.type, h, t};
}

inline bool RelaxedArgMatch(const Arg &pred, const Arg &gold) {
  return pred.type == gold.type && Overlap(pred, gold);
}

// Greedy preference among candidate predictions: leftmost head start, then
// longest head, then the same for the tail.
inline auto RelaxedPreference(const Rel &r) {
  return std::make_tuple(r.head.start, -static_cast<long long>(r.head.end),
                         r.tail.start, -static_cast<long long>(r.tail.end),
                         r.head.type, r.tail.type);
}

inline void CountRelaxedRelations(const std::set<Rel> &gold,
                                  const std::set<Rel> &pred,
                                  const std::set<std::string> &symmetric,
                                  TypeCounts &counts) {
  std::vector<Rel> preds(pred.begin(), pred.end());
  std::vector<bool> used(preds.size(), false);
  for (const Rel &g : gold) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (used[i] || preds[i].type != g.type) continue;
      const Rel &p = preds[i];
      bool ok = RelaxedArgMatch(p.head, g.head) && RelaxedArgMatch(p.tail, g.tail);
      if (!ok && symmetric.contains(g.type)) {
        ok = RelaxedArgMatch(p.head, g.tail) && RelaxedArgMatch(p.tail, g.head);
      }
      if (ok && (!best || RelaxedPreference(p) < RelaxedPreference(preds[*best]))) {
        best = i;
      }
    }
    if (best) {
      used[*best] = true;
      ++counts[g.type].tp;
    } else {
      ++counts[g.type].fn;
    }
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!used[i]) ++counts[preds[i].type].fp;
  }
}

inline void RequireAligned(const Corpus &gold, const Corpus &pred) {
  AlignmentReport report = Align(gold, pred);
  if (!report.ok()) throw AlignmentError(std::move(report));
}

}  // namespace internal

// Per-entity-type counts. Excluded types are removed from both sides.
inline TypeCounts MatchNerUnchecked(const Corpus &gold, const Corpus &pred,
                                    Criterion criterion,
                                    const std::set<std::string> &excluded = {}) {
  TypeCounts counts;
  for (const internal::SentencePair &sp : internal::PairSentences(gold, pred)) {
    std::set<internal::Arg> g = internal::TypedMentions(sp.gold, excluded);
    std::set<internal::Arg> p = internal::TypedMentions(sp.pred, excluded);
    if (criterion.kind == CriterionKind::kRelaxed) {
      for (const internal::Arg &gm : g) {
        bool found = std::any_of(p.begin(), p.end(), [&](const internal::Arg &pm) {
          return internal::RelaxedArgMatch(pm, gm);
        });
        found ? ++counts[gm.type].tp : ++counts[gm.type].fn;
      }
      for (const internal::Arg &pm : p) {
        bool hit = std::any_of(g.begin(), g.end(), [&](const internal::Arg &gm) {
          return internal::RelaxedArgMatch(pm, gm);
        });
        if (!hit) ++counts[pm.type].fp;
      }
    } else {
      for (const internal::Arg &gm : g) {
        p.contains(gm) ? ++counts[gm.type].tp : ++counts[gm.type].fn;
      }
      for (const internal::Arg &pm : p) {
        if (!g.contains(pm)) ++counts[pm.type].fp;
      }
    }
  }
  return counts;
}

// Per-relation-type counts under `criterion`.
inline TypeCounts MatchReUnchecked(const Corpus &gold, const Corpus &pred,
                                   Criterion criterion,
                                   const std::set<std::string> &symmetric = {},
                                   const std::set<std::string> &excluded = {}) {
  TypeCounts counts;
  for (const internal::SentencePair &sp : internal::PairSentences(gold, pred)) {
    std::set<internal::Rel> g =
        internal::TypedRelations(sp.gold, symmetric, excluded);
    std::set<internal::Rel> p =
        internal::TypedRelations(sp.pred, symmetric, excluded);
    switch (criterion.kind) {
      case CriterionKind::kStrict:
        for (const internal::Rel &r : g) {
          p.contains(r) ? ++counts[r.type].tp : ++counts[r.type].fn;
        }
        for (const internal::Rel &r : p) {
          if (!g.contains(r)) ++counts[r.type].fp;
        }
        break;
      case CriterionKind::kBoundaries:
      case CriterionKind::kLastToken: {
        std::map<internal::ReducedRel, std::pair<std::size_t, std::size_t>> cls;
        for (const internal::Rel &r : g)
          ++cls[internal::ReduceRel(r, criterion.kind, symmetric)].first;
        for (const internal::Rel &r : p)
          ++cls[internal::ReduceRel(r, criterion.kind, symmetric)].second;
        for (const auto &[key, n] : cls) {
          std::size_t tp = std::min(n.first, n.second);
          Counts &c = counts[std::get<0>(key)];
          c.tp += tp;
          c.fn += n.first - tp;
          c.fp += n.second - tp;
        }
        break;
      }
      case CriterionKind::kRelaxed:
        internal::CountRelaxedRelations(g, p, symmetric, counts);
        break;
    }
  }
  return counts;
}

inline TypeCounts MatchNer(const Corpus &gold, const Corpus &pred,
                           Criterion criterion,
                           const std::set<std::string> &excluded = {}) {
  RequireWellFormed(gold);
  RequireWellFormed(pred);
  internal::RequireAligned(gold, pred);
  return MatchNerUnchecked(gold, pred, criterion, excluded);
}

inline TypeCounts MatchRe(const Corpus &gold, const Corpus &pred,
                          Criterion criterion,
                          const std::set<std::string> &symmetric = {},
                          const std::set<std::string> &excluded = {}) {
  RequireWellFormed(gold);
  RequireWellFormed(pred);
  internal::RequireAligned(gold, pred);
  return MatchReUnchecked(gold, pred, criterion, symmetric, excluded);
}

namespace internal {

inline TaskReport BuildTaskReport(const TypeCounts &counts,
                                  const std::set<std::string> &gold_types,
                                  Average average) {
  TaskReport report;
  Counts total;
  for (const std::string &t : gold_types) report.per_type[t] = PRF{};
  for (const auto &[type, c] : counts) {
    report.per_type[type] = PRF::FromCounts(c);
    total += c;
    if (!gold_types.contains(type)) report.spurious_types.push_back(type);
  }
  report.total = PRF::FromCounts(total);
  if (average == Average::kMacro) {
    double p = 0.0, r = 0.0, f = 0.0;
    for (const std::string &t : gold_types) {
      const PRF &x = report.per_type[t];
      p += x.precision;
      r += x.recall;
      f += x.f1;
    }
    const double n = static_cast<double>(gold_types.size());
    report.total.precision = SafeRatio(p, n);
    report.total.recall = SafeRatio(r, n);
    report.total.f1 = SafeRatio(f, n);
  }
  return report;
}

inline std::set<std::string> Without(std::set<std::string> types,
                                     const std::set<std::string> &excluded) {
  for (const std::string &t : excluded) types.erase(t);
  return types;
}

}  // namespace internal

inline EvalReport Score(const Corpus &gold, const Corpus &pred,
                        const ScoreConfig &config) {
  RequireWellFormed(gold);
  RequireWellFormed(pred);
  if (!config.allow_misaligned) internal::RequireAligned(gold, pred);

  const std::set<std::string> gold_entity_types = EntityTypes(gold);
  const std::set<std::string> gold_relation_types = RelationTypes(gold);
  const std::set<std::string> ner_types =
      internal::Without(gold_entity_types, config.excluded_entity_types);
  const std::set<std::string> re_types =
      internal::Without(gold_relation_types, config.excluded_relation_types);
  if (ner_types.empty() && re_types.empty()) {
    throw ScoringError("no scorable annotations");
  }

  EvalReport report;
  report.config = config;
  report.non_standard = config.criterion.kind == CriterionKind::kRelaxed ||
                        config.criterion.kind == CriterionKind::kLastToken;
  for (const std::string &t : config.excluded_entity_types) {
    if (!gold_entity_types.contains(t)) {
      report.warnings.push_back("excluded entity type \"" + t +
                                "\" does not occur in gold");
    }
  }
  for (const std::string &t : config.excluded_relation_types) {
    if (!gold_relation_types.contains(t)) {
      report.warnings.push_back("excluded relation type \"" + t +
                                "\" does not occur in gold");
    }
  }
  report.ner = internal::BuildTaskReport(
      MatchNerUnchecked(gold, pred, config.criterion,
                        config.excluded_entity_types),
      ner_types, config.average);
  report.re = internal::BuildTaskReport(
      MatchReUnchecked(gold, pred, config.criterion, config.symmetric_types,
                       config.excluded_relation_types),
      re_types, config.average);
  return report;
}

// Scores under every criterion, Strict first.
inline std::map<CriterionKind, EvalReport> ScoreAllSettings(
    const Corpus &gold, const Corpus &pred, const ScoreConfig &base) {
  std::map<CriterionKind, EvalReport> out;
  for (CriterionKind kind : kAllCriteria) {
    ScoreConfig config = base;
    config.criterion.kind = kind;
    out.emplace(kind, Score(gold, pred, config));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline void to_json(nlohmann::json &j, const ScoreConfig &c) {
  j = {{"criterion", CriterionName(c.criterion.kind)},
       {"diagnostic", c.criterion.diagnostic()},
       {"average", AverageName(c.average)},
       {"excluded_entity_types", c.excluded_entity_types},
       {"excluded_relation_types", c.excluded_relation_types},
       {"symmetric_types", c.symmetric_types},
       {"allow_misaligned", c.allow_misaligned}};
}

inline void from_json(const nlohmann::json &j, ScoreConfig &c) {
  auto kind = ParseCriterion(j.at("criterion").get<std::string>());
  auto avg = ParseAverage(j.at("average").get<std::string>());
  if (!kind || !avg) throw Error("bad score config: " + j.dump());
  c.criterion.kind = *kind;
  c.average = *avg;
  c.excluded_entity_types =
      j.value("excluded_entity_types", std::set<std::string>{});
  c.excluded_relation_types =
      j.value("excluded_relation_types", std::set<std::string>{});
  c.symmetric_types = j.value("symmetric_types", std::set<std::string>{});
  c.allow_misaligned = j.value("allow_misaligned", false);
}

inline void to_json(nlohmann::json &j, const PRF &p) {
  j = {{"tp", p.tp},         {"fp", p.fp},         {"fn", p.fn},
       {"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

inline void from_json(const nlohmann::json &j, PRF &p) {
  j.at("tp").get_to(p.tp);
  j.at("fp").get_to(p.fp);
  j.at("fn").get_to(p.fn);
  j.at("precision").get_to(p.precision);
  j.at("recall").get_to(p.recall);
  j.at("f1").get_to(p.f1);
}

inline void to_json(nlohmann::json &j, const TaskReport &t) {
  j = t.total;
  j["per_type"] = t.per_type;
  j["spurious_types"] = t.spurious_types;
}

inline void from_json(const nlohmann::json &j, TaskReport &t) {
  j.get_to(t.total);
  j.at("per_type").get_to(t.per_type);
  j.at("spurious_types").get_to(t.spurious_types);
}

inline void to_json(nlohmann::json &j, const EvalReport &r) {
  j = {{"config", r.config},
       {"non_standard", r.non_standard},
       {"warnings", r.warnings},
       {"ner", r.ner},
       {"re", r.re}};
}

inline void from_json(const nlohmann::json &j, EvalReport &r) {
  j.at("config").get_to(r.config);
  j.at("non_standard").get_to(r.non_standard);
  j.at("warnings").get_to(r.warnings);
  j.at("ner").get_to(r.ner);
  j.at("re").get_to(r.re);
}

// Percentage with one decimal, e.g. 0.6284 -> "62.8".
inline std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v * 100.0);
  return buf;
}

inline std::string FormatReportTable(const EvalReport &r) {
  std::ostringstream out;
  out << CriterionName(r.config.criterion.kind) << " "
      << AverageName(r.config.average);
  if (r.non_standard) out << " (non-standard)";
  out << "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-5s %-24s %7s %7s %7s %7s %7s %7s\n",
                "task", "type", "tp", "fp", "fn", "P", "R", "F1");
  out << line;
  auto row = [&](const char *task, const std::string &type, const PRF &p) {
    std::snprintf(line, sizeof(line), "%-5s %-24s %7zu %7zu %7zu %7s %7s %7s\n",
                  task, type.c_str(), p.tp, p.fp, p.fn,
                  Percent(p.precision).c_str(), Percent(p.recall).c_str(),
                  Percent(p.f1).c_str());
    out << line;
  };
  for (auto [name, task] : {std::pair<const char *, const TaskReport *>{"NER", &r.ner},
                            {"RE", &r.re}}) {
    row(name, "ALL", task->total);
    for (const auto &[type, p] : task->per_type) row(name, type, p);
  }
  for (const std::string &w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace sincere

#endif  // SINCERE_SCORING_HPP_
