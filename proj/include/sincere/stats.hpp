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

// Dataset statistics and integrity checks against published counts.

#ifndef SINCERE_STATS_HPP_
#define SINCERE_STATS_HPP_

#include <cstddef>
#include <cstdio>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sincere/core_model.hpp"
#include "sincere/ingest.hpp"

namespace sincere {

struct SplitCounts {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t entities = 0;
  std::size_t relations = 0;

  SplitCounts &operator+=(const SplitCounts &o) {
    documents += o.documents;
    sentences += o.sentences;
    tokens += o.tokens;
    entities += o.entities;
    relations += o.relations;
    return *this;
  }
  friend bool operator==(const SplitCounts &, const SplitCounts &) = default;
};

struct CooccurrenceKey {
  std::string relation_type;
  std::string head_type;
  std::string tail_type;
  friend auto operator<=>(const CooccurrenceKey &,
                          const CooccurrenceKey &) = default;
  friend bool operator==(const CooccurrenceKey &,
                         const CooccurrenceKey &) = default;
};

using Cooccurrence = std::map<CooccurrenceKey, std::size_t>;
using Histogram = std::map<std::size_t, std::size_t>;

struct StatsReport {
  std::map<std::string, SplitCounts> splits;
  SplitCounts total;
  std::map<std::string, std::size_t> entity_types;
  std::map<std::string, std::size_t> relation_types;
  Histogram entities_per_sentence;
  Histogram relations_per_sentence;
  std::size_t zero_relation_sentences = 0;
  // Mention pairs within a sentence whose spans cross without containment.
  std::size_t overlapping_mentions = 0;
  // Mention pairs where one span contains the other (identical spans
  // included).
  std::size_t nested_mentions = 0;
  Cooccurrence cooccurrence;

  double zero_relation_fraction() const {
    return total.sentences == 0
               ? 0.0
               : static_cast<double>(zero_relation_sentences) /
                     static_cast<double>(total.sentences);
  }
  friend bool operator==(const StatsReport &, const StatsReport &) = default;
};

inline std::string SplitName(const Corpus &corpus) {
  return corpus.split.value_or("all");
}

// Associative merge of partial statistics.
inline void MergeStats(StatsReport &into, const StatsReport &from) {
  for (const auto &[name, c] : from.splits) into.splits[name] += c;
  into.total += from.total;
  for (const auto &[t, n] : from.entity_types) into.entity_types[t] += n;
  for (const auto &[t, n] : from.relation_types) into.relation_types[t] += n;
  for (const auto &[k, n] : from.entities_per_sentence)
    into.entities_per_sentence[k] += n;
  for (const auto &[k, n] : from.relations_per_sentence)
    into.relations_per_sentence[k] += n;
  into.zero_relation_sentences += from.zero_relation_sentences;
  into.overlapping_mentions += from.overlapping_mentions;
  into.nested_mentions += from.nested_mentions;
  for (const auto &[k, n] : from.cooccurrence) into.cooccurrence[k] += n;
}

inline Cooccurrence CooccurrenceMatrix(const Corpus &corpus) {
  RequireWellFormed(corpus);
  Cooccurrence out;
  for (const Document &doc : corpus.docs) {
    for (const Sentence &sent : doc.sentences) {
      for (const RelationMention &r : sent.relations) {
        ++out[{r.type, sent.FindEntity(r.head)->type,
               sent.FindEntity(r.tail)->type}];
      }
    }
  }
  return out;
}

inline StatsReport ComputeStats(const Corpus &corpus) {
  RequireWellFormed(corpus);
  StatsReport report;
  SplitCounts counts;
  counts.documents = corpus.docs.size();
  for (const Document &doc : corpus.docs) {
    for (const Sentence &sent : doc.sentences) {
      ++counts.sentences;
      counts.tokens += sent.tokens.size();
      counts.entities += sent.entities.size();
      counts.relations += sent.relations.size();
      ++report.entities_per_sentence[sent.entities.size()];
      ++report.relations_per_sentence[sent.relations.size()];
      if (sent.relations.empty()) ++report.zero_relation_sentences;
      for (const Mention &m : sent.entities) ++report.entity_types[m.type];
      for (const RelationMention &r : sent.relations)
        ++report.relation_types[r.type];
      const auto &ents = sent.entities;
      for (std::size_t i = 0; i < ents.size(); ++i) {
        for (std::size_t j = i + 1; j < ents.size(); ++j) {
          if (!ents[i].Overlaps(ents[j])) continue;
          const bool i_in_j =
              ents[j].start <= ents[i].start && ents[i].end <= ents[j].end;
          const bool j_in_i =
              ents[i].start <= ents[j].start && ents[j].end <= ents[i].end;
          (i_in_j || j_in_i) ? ++report.nested_mentions
                             : ++report.overlapping_mentions;
        }
      }
    }
  }
  report.splits[SplitName(corpus)] = counts;
  report.total = counts;
  report.cooccurrence = CooccurrenceMatrix(corpus);
  return report;
}

// Statistics over several split files (train, dev, test, ...).
inline StatsReport ComputeStats(const std::vector<Corpus> &corpora) {
  StatsReport report;
  for (const Corpus &c : corpora) MergeStats(report, ComputeStats(c));
  return report;
}

// ---------------------------------------------------------------------------
// Mapping complexity

struct MappingComplexity {
  // Number of distinct (head type, tail type) pairs per relation type.
  std::map<std::string, std::size_t> pairs_per_relation;
  bool bijective = true;
};

inline MappingComplexity AnalyzeMapping(const Cooccurrence &coocc) {
  MappingComplexity out;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> users;
  for (const auto &[key, n] : coocc) {
    if (n == 0) continue;
    ++out.pairs_per_relation[key.relation_type];
    users[{key.head_type, key.tail_type}].insert(key.relation_type);
  }
  for (const auto &[rel, pairs] : out.pairs_per_relation) {
    if (pairs != 1) out.bijective = false;
  }
  for (const auto &[pair, rels] : users) {
    if (rels.size() > 1) out.bijective = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference manifests

struct ManifestCounts {
  std::optional<std::size_t> documents;
  std::optional<std::size_t> sentences;
  std::optional<std::size_t> tokens;
  std::optional<std::size_t> entities;
  std::optional<std::size_t> relations;
};

struct ReferenceManifest {
  std::string source;
  // True when the dataset is known to contain only sentences with at least
  // one relation.
  bool all_relational = false;
  std::map<std::string, ManifestCounts> splits;
  std::optional<std::map<std::string, std::size_t>> entity_types;
  std::optional<std::map<std::string, std::size_t>> relation_types;
};

struct Discrepancy {
  std::string field;
  std::int64_t expected = 0;
  std::int64_t actual = 0;
  std::int64_t delta = 0;  // actual - expected

  std::string ToString() const {
    return field + ": expected " + std::to_string(expected) + ", actual " +
           std::to_string(actual) + " (" + (delta > 0 ? "+" : "") +
           std::to_string(delta) + ")";
  }
  friend bool operator==(const Discrepancy &, const Discrepancy &) = default;
};

// Exact comparison; one Discrepancy per differing count. A manifest split
// absent from the report compares against zeros.
inline std::vector<Discrepancy> CheckIntegrity(
    const StatsReport &report, const ReferenceManifest &manifest) {
  std::vector<Discrepancy> out;
  auto compare = [&](const std::string &field, std::optional<std::size_t> want,
                     std::size_t have) {
    if (!want || *want == have) return;
    const auto e = static_cast<std::int64_t>(*want);
    const auto a = static_cast<std::int64_t>(have);
    out.push_back({field, e, a, a - e});
  };
  for (const auto &[split, want] : manifest.splits) {
    SplitCounts have;
    if (auto it = report.splits.find(split); it != report.splits.end()) {
      have = it->second;
    }
    compare(split + ".documents", want.documents, have.documents);
    compare(split + ".sentences", want.sentences, have.sentences);
    compare(split + ".tokens", want.tokens, have.tokens);
    compare(split + ".entities", want.entities, have.entities);
    compare(split + ".relations", want.relations, have.relations);
  }
  auto compare_types = [&](const std::string &prefix,
                           const std::map<std::string, std::size_t> &want,
                           const std::map<std::string, std::size_t> &have) {
    std::set<std::string> names;
    for (const auto &[t, n] : want) names.insert(t);
    for (const auto &[t, n] : have) names.insert(t);
    for (const std::string &t : names) {
      auto w = want.find(t);
      auto h = have.find(t);
      compare(prefix + t, w == want.end() ? 0 : w->second,
              h == have.end() ? 0 : h->second);
    }
  };
  if (manifest.entity_types) {
    compare_types("entity_types.", *manifest.entity_types, report.entity_types);
  }
  if (manifest.relation_types) {
    compare_types("relation_types.", *manifest.relation_types,
                  report.relation_types);
  }
  return out;
}

// Manifest that a report trivially satisfies.
inline ReferenceManifest ManifestOf(const StatsReport &report,
                                    std::string source = "derived") {
  ReferenceManifest m;
  m.source = std::move(source);
  m.all_relational = report.total.sentences > 0 &&
                     report.zero_relation_sentences == 0;
  for (const auto &[split, c] : report.splits) {
    m.splits[split] = {c.documents, c.sentences, c.tokens, c.entities,
                       c.relations};
  }
  m.entity_types = report.entity_types;
  m.relation_types = report.relation_types;
  return m;
}

struct TruncationFinding {
  double zero_relation_fraction = 0.0;
  bool suspicious = false;
  std::string reason;
};

// Suspicious when a dataset known to contain relation-free sentences shows
// none: the usual trace of filtering to sentences with relations.
inline TruncationFinding DetectTruncation(const StatsReport &report,
                                          std::optional<bool> all_relational) {
  TruncationFinding f;
  f.zero_relation_fraction = report.zero_relation_fraction();
  if (all_relational.has_value() && !*all_relational &&
      report.total.sentences > 0 && report.zero_relation_sentences == 0) {
    f.suspicious = true;
    f.reason =
        "no relation-free sentences, but the reference dataset contains them";
  }
  return f;
}

// ---------------------------------------------------------------------------
// Serialization

inline void to_json(nlohmann::json &j, const SplitCounts &c) {
  j = {{"documents", c.documents}, {"sentences", c.sentences},
       {"tokens", c.tokens},       {"entities", c.entities},
       {"relations", c.relations}};
}

inline void from_json(const nlohmann::json &j, SplitCounts &c) {
  j.at("documents").get_to(c.documents);
  j.at("sentences").get_to(c.sentences);
  j.at("tokens").get_to(c.tokens);
  j.at("entities").get_to(c.entities);
  j.at("relations").get_to(c.relations);
}

namespace internal {

inline nlohmann::json HistogramToJson(const Histogram &h) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto &[k, n] : h) j[std::to_string(k)] = n;
  return j;
}

inline Histogram HistogramFromJson(const nlohmann::json &j) {
  Histogram h;
  for (const auto &[k, n] : j.items()) h[std::stoul(k)] = n.get<std::size_t>();
  return h;
}

}  // namespace internal

inline void to_json(nlohmann::json &j, const StatsReport &r) {
  nlohmann::json co = nlohmann::json::array();
  for (const auto &[k, n] : r.cooccurrence) {
    co.push_back({{"relation_type", k.relation_type},
                  {"head_type", k.head_type},
                  {"tail_type", k.tail_type},
                  {"count", n}});
  }
  j = {{"splits", r.splits},
       {"total", r.total},
       {"entity_types", r.entity_types},
       {"relation_types", r.relation_types},
       {"entities_per_sentence", internal::HistogramToJson(r.entities_per_sentence)},
       {"relations_per_sentence",
        internal::HistogramToJson(r.relations_per_sentence)},
       {"zero_relation_sentences", r.zero_relation_sentences},
       {"zero_relation_fraction", r.zero_relation_fraction()},
       {"overlapping_mentions", r.overlapping_mentions},
       {"nested_mentions", r.nested_mentions},
       {"cooccurrence", co}};
}

inline void from_json(const nlohmann::json &j, StatsReport &r) {
  j.at("splits").get_to(r.splits);
  j.at("total").get_to(r.total);
  j.at("entity_types").get_to(r.entity_types);
  j.at("relation_types").get_to(r.relation_types);
  r.entities_per_sentence =
      internal::HistogramFromJson(j.at("entities_per_sentence"));
  r.relations_per_sentence =
      internal::HistogramFromJson(j.at("relations_per_sentence"));
  j.at("zero_relation_sentences").get_to(r.zero_relation_sentences);
  j.at("overlapping_mentions").get_to(r.overlapping_mentions);
  j.at("nested_mentions").get_to(r.nested_mentions);
  r.cooccurrence.clear();
  for (const auto &c : j.at("cooccurrence")) {
    r.cooccurrence[{c.at("relation_type").get<std::string>(),
                    c.at("head_type").get<std::string>(),
                    c.at("tail_type").get<std::string>()}] =
        c.at("count").get<std::size_t>();
  }
}

inline void to_json(nlohmann::json &j, const Discrepancy &d) {
  j = {{"field", d.field}, {"expected", d.expected}, {"actual", d.actual},
       {"delta", d.delta}};
}

inline void to_json(nlohmann::json &j, const MappingComplexity &m) {
  j = {{"pairs_per_relation", m.pairs_per_relation}, {"bijective", m.bijective}};
}

inline void to_json(nlohmann::json &j, const TruncationFinding &f) {
  j = {{"zero_relation_fraction", f.zero_relation_fraction},
       {"suspicious", f.suspicious},
       {"reason", f.reason}};
}

namespace internal {

inline std::optional<std::size_t> OptionalCount(const nlohmann::json &j,
                                                const char *key,
                                                const std::string &path) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned()) {
    throw IngestError(IngestError::Kind::kSchema,
                      "manifest: " + path + "." + key +
                          " must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

}  // namespace internal

inline ReferenceManifest ParseManifest(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error &e) {
    throw IngestError(IngestError::Kind::kSyntax,
                      std::string("manifest: ") + e.what());
  }
  if (!j.is_object() || !j.contains("splits") || !j["splits"].is_object()) {
    throw IngestError(IngestError::Kind::kSchema,
                      "manifest: expected object with \"splits\" object");
  }
  ReferenceManifest m;
  m.source = j.value("source", "");
  m.all_relational = j.value("all_relational", false);
  for (const auto &[split, c] : j["splits"].items()) {
    const std::string path = "splits." + split;
    m.splits[split] = {internal::OptionalCount(c, "documents", path),
                       internal::OptionalCount(c, "sentences", path),
                       internal::OptionalCount(c, "tokens", path),
                       internal::OptionalCount(c, "entities", path),
                       internal::OptionalCount(c, "relations", path)};
  }
  if (j.contains("entity_types"))
    m.entity_types = j["entity_types"].get<std::map<std::string, std::size_t>>();
  if (j.contains("relation_types"))
    m.relation_types =
        j["relation_types"].get<std::map<std::string, std::size_t>>();
  return m;
}

inline ReferenceManifest ReadManifestFile(const std::string &path) {
  return ParseManifest(SlurpFile(path));
}

inline nlohmann::json ManifestToJson(const ReferenceManifest &m) {
  nlohmann::json splits = nlohmann::json::object();
  for (const auto &[split, c] : m.splits) {
    nlohmann::json s = nlohmann::json::object();
    if (c.documents) s["documents"] = *c.documents;
    if (c.sentences) s["sentences"] = *c.sentences;
    if (c.tokens) s["tokens"] = *c.tokens;
    if (c.entities) s["entities"] = *c.entities;
    if (c.relations) s["relations"] = *c.relations;
    splits[split] = s;
  }
  nlohmann::json j = {{"source", m.source},
                      {"all_relational", m.all_relational},
                      {"splits", splits}};
  if (m.entity_types) j["entity_types"] = *m.entity_types;
  if (m.relation_types) j["relation_types"] = *m.relation_types;
  return j;
}

// Two TSV blocks: entity mentions per sentence, then relation mentions per
// sentence.
inline std::string FormatHistogramsTsv(const StatsReport &r) {
  std::ostringstream out;
  auto block = [&](const char *title, const Histogram &h) {
    out << "# " << title << "\n" << "mentions\tsentences\n";
    for (const auto &[k, n] : h) out << k << "\t" << n << "\n";
  };
  block("entities_per_sentence", r.entities_per_sentence);
  out << "\n";
  block("relations_per_sentence", r.relations_per_sentence);
  return out.str();
}

inline std::string FormatStatsTable(const StatsReport &r) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %10s %10s %10s %10s %10s\n", "split",
                "documents", "sentences", "tokens", "entities", "relations");
  out << line;
  auto row = [&](const std::string &name, const SplitCounts &c) {
    std::snprintf(line, sizeof(line), "%-12s %10zu %10zu %10zu %10zu %10zu\n",
                  name.c_str(), c.documents, c.sentences, c.tokens, c.entities,
                  c.relations);
    out << line;
  };
  for (const auto &[name, c] : r.splits) row(name, c);
  if (r.splits.size() > 1) row("total", r.total);
  std::snprintf(line, sizeof(line),
                "zero-relation sentences: %zu (%.1f%%)\n"
                "overlapping mention pairs: %zu, nested mention pairs: %zu\n",
                r.zero_relation_sentences, r.zero_relation_fraction() * 100.0,
                r.overlapping_mentions, r.nested_mentions);
  out << line;
  out << "entity types:";
  for (const auto &[t, n] : r.entity_types) out << " " << t << "=" << n;
  out << "\nrelation types:";
  for (const auto &[t, n] : r.relation_types) out << " " << t << "=" << n;
  out << "\n";
  MappingComplexity mc = AnalyzeMapping(r.cooccurrence);
  out << "relation/argument-type mapping: "
      << (mc.bijective ? "bijective" : "not bijective") << "\n";
  for (const auto &[k, n] : r.cooccurrence) {
    out << "  " << k.relation_type << "(" << k.head_type << ", " << k.tail_type
        << ") " << n << "\n";
  }
  return out.str();
}

}  // namespace sincere

#endif  // SINCERE_STATS_HPP_
