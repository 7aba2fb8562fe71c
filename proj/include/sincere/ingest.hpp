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

// Canonical annotation file ("schema": "sincere/1") and gold/prediction
// alignment.
//
//   {
//     "schema": "sincere/1",
//     "name": "conll04",
//     "split": "train",                       // optional
//     "docs": [
//       {"doc_key": "d0",
//        "sentences": [
//          {"tokens": ["John", "works", "for", "IBM"],
//           "entities": [{"id": "e0", "start": 0, "end": 1, "type": "Peop"},
//                        {"id": "e1", "start": 3, "end": 4, "type": "Org"}],
//           "relations": [{"head": "e0", "tail": "e1", "type": "Work_For"}]}
//        ]}
//     ]
//   }

#ifndef SINCERE_INGEST_HPP_
#define SINCERE_INGEST_HPP_

#include <cstddef>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sincere/core_model.hpp"

namespace sincere {

inline constexpr std::string_view kSchemaVersion = "sincere/1";

class IngestError : public Error {
 public:
  enum class Kind { kIo, kSyntax, kSchema, kInvariant };

  IngestError(Kind kind, const std::string &what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace internal {

using Json = nlohmann::json;

[[noreturn]] inline void SchemaFail(const std::string &path,
                                    const std::string &what) {
  throw IngestError(IngestError::Kind::kSchema,
                    "schema error at " + path + ": " + what);
}

inline const Json &Field(const Json &obj, const char *key,
                         const std::string &path) {
  auto it = obj.find(key);
  if (it == obj.end()) SchemaFail(path, std::string("missing \"") + key + "\"");
  return *it;
}

inline std::string StringField(const Json &obj, const char *key,
                               const std::string &path) {
  const Json &v = Field(obj, key, path);
  if (!v.is_string()) SchemaFail(path + "." + key, "expected string");
  return v.get<std::string>();
}

inline std::size_t IndexField(const Json &obj, const char *key,
                              const std::string &path) {
  const Json &v = Field(obj, key, path);
  if (!v.is_number_unsigned()) {
    SchemaFail(path + "." + key, "expected non-negative integer");
  }
  return v.get<std::size_t>();
}

inline const Json &ArrayField(const Json &obj, const char *key,
                              const std::string &path) {
  const Json &v = Field(obj, key, path);
  if (!v.is_array()) SchemaFail(path + "." + key, "expected array");
  return v;
}

inline void RequireObject(const Json &v, const std::string &path) {
  if (!v.is_object()) SchemaFail(path, "expected object");
}

inline std::string LineColumn(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Corpus CorpusFromJson(const Json &root) {
  RequireObject(root, "$");
  auto schema = root.find("schema");
  if (schema == root.end()) SchemaFail("$", "missing \"schema\"");
  if (!schema->is_string() || schema->get<std::string>() != kSchemaVersion) {
    SchemaFail("$.schema", "expected \"" + std::string(kSchemaVersion) + "\"");
  }
  Corpus corpus;
  corpus.name = StringField(root, "name", "$");
  if (auto it = root.find("split"); it != root.end() && !it->is_null()) {
    if (!it->is_string()) SchemaFail("$.split", "expected string or null");
    corpus.split = it->get<std::string>();
  }
  const Json &docs = ArrayField(root, "docs", "$");
  corpus.docs.reserve(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const std::string dpath = "$.docs[" + std::to_string(d) + "]";
    RequireObject(docs[d], dpath);
    Document doc;
    doc.doc_key = StringField(docs[d], "doc_key", dpath);
    const Json &sents = ArrayField(docs[d], "sentences", dpath);
    doc.sentences.reserve(sents.size());
    for (std::size_t s = 0; s < sents.size(); ++s) {
      const std::string spath = dpath + ".sentences[" + std::to_string(s) + "]";
      RequireObject(sents[s], spath);
      Sentence sent;
      const Json &tokens = ArrayField(sents[s], "tokens", spath);
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (!tokens[t].is_string()) {
          SchemaFail(spath + ".tokens[" + std::to_string(t) + "]",
                     "expected string");
        }
        sent.tokens.push_back(tokens[t].get<std::string>());
      }
      const Json &ents = ArrayField(sents[s], "entities", spath);
      for (std::size_t e = 0; e < ents.size(); ++e) {
        const std::string epath = spath + ".entities[" + std::to_string(e) + "]";
        RequireObject(ents[e], epath);
        sent.entities.push_back({StringField(ents[e], "id", epath),
                                 IndexField(ents[e], "start", epath),
                                 IndexField(ents[e], "end", epath),
                                 StringField(ents[e], "type", epath)});
      }
      const Json &rels = ArrayField(sents[s], "relations", spath);
      for (std::size_t r = 0; r < rels.size(); ++r) {
        const std::string rpath =
            spath + ".relations[" + std::to_string(r) + "]";
        RequireObject(rels[r], rpath);
        sent.relations.push_back({StringField(rels[r], "head", rpath),
                                  StringField(rels[r], "tail", rpath),
                                  StringField(rels[r], "type", rpath)});
      }
      doc.sentences.push_back(std::move(sent));
    }
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace internal

inline nlohmann::ordered_json CorpusToJson(const Corpus &corpus) {
  using OJson = nlohmann::ordered_json;
  OJson root;
  root["schema"] = kSchemaVersion;
  root["name"] = corpus.name;
  if (corpus.split) root["split"] = *corpus.split;
  OJson docs = OJson::array();
  for (const Document &doc : corpus.docs) {
    OJson sents = OJson::array();
    for (const Sentence &sent : doc.sentences) {
      OJson ents = OJson::array();
      for (const Mention &m : sent.entities) {
        ents.push_back(
            {{"id", m.id}, {"start", m.start}, {"end", m.end}, {"type", m.type}});
      }
      OJson rels = OJson::array();
      for (const RelationMention &r : sent.relations) {
        rels.push_back({{"head", r.head}, {"tail", r.tail}, {"type", r.type}});
      }
      sents.push_back(
          {{"tokens", sent.tokens}, {"entities", ents}, {"relations", rels}});
    }
    docs.push_back({{"doc_key", doc.doc_key}, {"sentences", sents}});
  }
  root["docs"] = std::move(docs);
  return root;
}

// Parses canonical JSON text without checking corpus invariants. Used by
// the `check` command, which reports violations instead of failing.
inline Corpus ParseCanonicalUnchecked(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error &e) {
    std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw IngestError(IngestError::Kind::kSyntax,
                      "syntax error at " + internal::LineColumn(text, byte) +
                          ": " + e.what());
  }
  return internal::CorpusFromJson(root);
}

inline Corpus ParseCanonical(std::string_view text) {
  Corpus corpus = ParseCanonicalUnchecked(text);
  std::vector<Violation> v = ValidateCorpus(corpus);
  if (!v.empty()) {
    throw IngestError(IngestError::Kind::kInvariant,
                      "invalid corpus: " + v.front().ToString());
  }
  return corpus;
}

inline std::string SlurpFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IngestError(IngestError::Kind::kIo, "cannot open " + path);
  }
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline Corpus ReadCanonical(std::istream &in) {
  std::string text(std::istreambuf_iterator<char>(in), {});
  return ParseCanonical(text);
}

inline Corpus ReadCanonicalFile(const std::string &path) {
  return ParseCanonical(SlurpFile(path));
}

// Serialized form: 2-space indentation, keys in schema order, UTF-8 kept
// verbatim, trailing newline.
inline std::string SerializeCanonical(const Corpus &corpus) {
  return CorpusToJson(corpus).dump(2) + "\n";
}

inline void WriteCanonical(const Corpus &corpus, std::ostream &out) {
  RequireWellFormed(corpus);
  out << SerializeCanonical(corpus);
  if (!out) throw IngestError(IngestError::Kind::kIo, "write failed");
}

inline void WriteCanonicalFile(const Corpus &corpus, const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError(IngestError::Kind::kIo, "cannot write " + path);
  WriteCanonical(corpus, out);
}

// ---------------------------------------------------------------------------
// Alignment

enum class MismatchKind { kMissingDoc, kMissingSentence, kExtraSentence,
                          kTokenMismatch };

inline const char *MismatchKindName(MismatchKind kind) {
  switch (kind) {
    case MismatchKind::kMissingDoc: return "MissingDoc";
    case MismatchKind::kMissingSentence: return "MissingSentence";
    case MismatchKind::kExtraSentence: return "ExtraSentence";
    case MismatchKind::kTokenMismatch: return "TokenMismatch";
  }
  return "Unknown";
}

struct Mismatch {
  std::string doc_key;
  std::optional<std::size_t> sentence;  // absent for MissingDoc
  MismatchKind kind;
  std::string reason;

  std::string ToString() const {
    std::string s = std::string(MismatchKindName(kind)) + " at " + doc_key;
    if (sentence) s += "/sent" + std::to_string(*sentence);
    if (!reason.empty()) s += ": " + reason;
    return s;
  }
};

struct AlignmentReport {
  std::size_t matched = 0;
  std::vector<Mismatch> mismatches;

  bool ok() const { return mismatches.empty(); }
};

// Pairs sentences by (doc_key, sentence index) and requires identical token
// sequences.
inline AlignmentReport Align(const Corpus &gold, const Corpus &pred) {
  AlignmentReport report;
  std::map<std::string, const Document *> pred_docs;
  for (const Document &d : pred.docs) pred_docs.emplace(d.doc_key, &d);
  std::map<std::string, const Document *> gold_docs;
  for (const Document &d : gold.docs) gold_docs.emplace(d.doc_key, &d);

  for (const Document &g : gold.docs) {
    auto it = pred_docs.find(g.doc_key);
    if (it == pred_docs.end()) {
      report.mismatches.push_back(
          {g.doc_key, std::nullopt, MismatchKind::kMissingDoc,
           std::to_string(g.sentences.size()) + " gold sentences"});
      continue;
    }
    const Document &p = *it->second;
    for (std::size_t s = 0; s < g.sentences.size(); ++s) {
      if (s >= p.sentences.size()) {
        report.mismatches.push_back(
            {g.doc_key, s, MismatchKind::kMissingSentence, ""});
        continue;
      }
      const auto &gt = g.sentences[s].tokens;
      const auto &pt = p.sentences[s].tokens;
      if (gt != pt) {
        std::string why;
        if (gt.size() != pt.size()) {
          why = std::to_string(gt.size()) + " gold tokens vs " +
                std::to_string(pt.size()) + " predicted";
        } else {
          for (std::size_t t = 0; t < gt.size(); ++t) {
            if (gt[t] != pt[t]) {
              why = "token " + std::to_string(t) + ": \"" + gt[t] +
                    "\" vs \"" + pt[t] + "\"";
              break;
            }
          }
        }
        report.mismatches.push_back(
            {g.doc_key, s, MismatchKind::kTokenMismatch, why});
      } else {
        ++report.matched;
      }
    }
    for (std::size_t s = g.sentences.size(); s < p.sentences.size(); ++s) {
      report.mismatches.push_back(
          {g.doc_key, s, MismatchKind::kExtraSentence, ""});
    }
  }
  for (const Document &p : pred.docs) {
    if (gold_docs.contains(p.doc_key)) continue;
    for (std::size_t s = 0; s < p.sentences.size(); ++s) {
      report.mismatches.push_back({p.doc_key, s, MismatchKind::kExtraSentence,
                                   "document absent from gold"});
    }
  }
  return report;
}

}  // namespace sincere

#endif  // SINCERE_INGEST_HPP_
