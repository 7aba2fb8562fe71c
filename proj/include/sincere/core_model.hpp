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

// In-memory annotation model: documents of tokenized sentences carrying
// typed entity mentions and typed directed relations between them.
//
// Token offsets are 0-based and end-exclusive. Relations never cross a
// sentence boundary. Every other module assumes a corpus that passes
// ValidateCorpus().

#ifndef SINCERE_CORE_MODEL_HPP_
#define SINCERE_CORE_MODEL_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

namespace sincere {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an operation that requires a well-formed corpus gets one
// that is not.
class InvalidCorpusError : public Error {
 public:
  using Error::Error;
};

struct Mention {
  std::string id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;

  std::size_t length() const { return end - start; }
  bool Overlaps(const Mention &other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const Mention &, const Mention &) = default;
};

struct RelationMention {
  std::string head;
  std::string tail;
  std::string type;
  friend bool operator==(const RelationMention &,
                         const RelationMention &) = default;
};

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<Mention> entities;
  std::vector<RelationMention> relations;

  // Returns nullptr when no mention carries `id`.
  const Mention *FindEntity(const std::string &id) const {
    for (const Mention &m : entities) {
      if (m.id == id) return &m;
    }
    return nullptr;
  }
  friend bool operator==(const Sentence &, const Sentence &) = default;
};

struct Document {
  std::string doc_key;
  std::vector<Sentence> sentences;
  friend bool operator==(const Document &, const Document &) = default;
};

struct Corpus {
  std::string name;
  std::optional<std::string> split;
  std::vector<Document> docs;

  std::size_t SentenceCount() const {
    std::size_t n = 0;
    for (const Document &d : docs) n += d.sentences.size();
    return n;
  }
  friend bool operator==(const Corpus &, const Corpus &) = default;
};

// Identity of an entity mention for scoring. `type` is present for typed
// (Strict) keys and absent for untyped (Boundaries) keys.
struct EntityKey {
  std::string doc_key;
  std::size_t sentence = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<std::string> type;

  friend auto operator<=>(const EntityKey &, const EntityKey &) = default;
  friend bool operator==(const EntityKey &, const EntityKey &) = default;
};

// Relation arguments: the head and tail are EntityKeys of the same kind
// (typed or untyped) as the key itself.
struct RelationKey {
  std::string doc_key;
  std::size_t sentence = 0;
  std::string type;
  EntityKey head;
  EntityKey tail;

  friend auto operator<=>(const RelationKey &, const RelationKey &) = default;
  friend bool operator==(const RelationKey &, const RelationKey &) = default;
};

enum class ViolationKind {
  kEmptyDocKey,
  kDuplicateDocKey,
  kEmptyTokens,
  kEmptyMentionId,
  kDuplicateMentionId,
  kSpanEmpty,
  kSpanOutOfBounds,
  kDanglingEndpoint,
  kSelfRelation,
};

inline const char *ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kEmptyDocKey: return "EmptyDocKey";
    case ViolationKind::kDuplicateDocKey: return "DuplicateDocKey";
    case ViolationKind::kEmptyTokens: return "EmptyTokens";
    case ViolationKind::kEmptyMentionId: return "EmptyMentionId";
    case ViolationKind::kDuplicateMentionId: return "DuplicateMentionId";
    case ViolationKind::kSpanEmpty: return "SpanEmpty";
    case ViolationKind::kSpanOutOfBounds: return "SpanOutOfBounds";
    case ViolationKind::kDanglingEndpoint: return "DanglingEndpoint";
    case ViolationKind::kSelfRelation: return "SelfRelation";
  }
  return "Unknown";
}

struct Violation {
  ViolationKind kind;
  // Location path such as "doc0/sent2/e1" or "doc0/sent2/rel0".
  std::string location;
  std::string detail;

  std::string ToString() const {
    std::string s = std::string(ViolationKindName(kind)) + " at " + location;
    if (!detail.empty()) s += ": " + detail;
    return s;
  }
  friend bool operator==(const Violation &, const Violation &) = default;
};

namespace internal {

inline std::string SentencePath(const Document &doc, std::size_t s) {
  return doc.doc_key + "/sent" + std::to_string(s);
}

}  // namespace internal

// Returns every invariant violation in the corpus; empty iff well-formed.
inline std::vector<Violation> ValidateCorpus(const Corpus &corpus) {
  std::vector<Violation> out;
  std::unordered_set<std::string> doc_keys;
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    const Document &doc = corpus.docs[d];
    if (doc.doc_key.empty()) {
      out.push_back({ViolationKind::kEmptyDocKey,
                     "docs[" + std::to_string(d) + "]", ""});
    } else if (!doc_keys.insert(doc.doc_key).second) {
      out.push_back({ViolationKind::kDuplicateDocKey, doc.doc_key, ""});
    }
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      const Sentence &sent = doc.sentences[s];
      const std::string path = internal::SentencePath(doc, s);
      if (sent.tokens.empty()) {
        out.push_back({ViolationKind::kEmptyTokens, path, ""});
      }
      std::unordered_set<std::string> ids;
      for (std::size_t e = 0; e < sent.entities.size(); ++e) {
        const Mention &m = sent.entities[e];
        const std::string where =
            path + "/" + (m.id.empty() ? "entities[" + std::to_string(e) + "]"
                                       : m.id);
        if (m.id.empty()) {
          out.push_back({ViolationKind::kEmptyMentionId, where, ""});
        } else if (!ids.insert(m.id).second) {
          out.push_back({ViolationKind::kDuplicateMentionId, where, ""});
        }
        const std::string span = "[" + std::to_string(m.start) + "," +
                                 std::to_string(m.end) + ")";
        if (m.end <= m.start) {
          out.push_back({ViolationKind::kSpanEmpty, where, span});
        } else if (m.end > sent.tokens.size()) {
          out.push_back({ViolationKind::kSpanOutOfBounds, where,
                         span + " exceeds " +
                             std::to_string(sent.tokens.size()) + " tokens"});
        }
      }
      for (std::size_t r = 0; r < sent.relations.size(); ++r) {
        const RelationMention &rel = sent.relations[r];
        const std::string where = path + "/rel" + std::to_string(r);
        bool dangling = false;
        for (const std::string *end : {&rel.head, &rel.tail}) {
          if (!ids.contains(*end)) {
            out.push_back({ViolationKind::kDanglingEndpoint, where,
                           "unknown mention id \"" + *end + "\""});
            dangling = true;
          }
        }
        if (!dangling && rel.head == rel.tail) {
          out.push_back({ViolationKind::kSelfRelation, where, rel.head});
        }
      }
    }
  }
  return out;
}

inline void RequireWellFormed(const Corpus &corpus) {
  std::vector<Violation> v = ValidateCorpus(corpus);
  if (!v.empty()) {
    std::string msg = "malformed corpus \"" + corpus.name + "\": " +
                      v.front().ToString();
    if (v.size() > 1) {
      msg += " (and " + std::to_string(v.size() - 1) + " more)";
    }
    throw InvalidCorpusError(msg);
  }
}

inline EntityKey MakeEntityKey(const std::string &doc_key,
                               std::size_t sentence, const Mention &m,
                               bool typed) {
  EntityKey key{doc_key, sentence, m.start, m.end, std::nullopt};
  if (typed) key.type = m.type;
  return key;
}

// Orders (head, tail) so that the pair no longer depends on direction.
inline void CanonicalizeSymmetric(EntityKey &head, EntityKey &tail) {
  if (tail < head) std::swap(head, tail);
}

inline std::set<EntityKey> EntityKeySet(const Corpus &corpus, bool typed) {
  RequireWellFormed(corpus);
  std::set<EntityKey> keys;
  for (const Document &doc : corpus.docs) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      for (const Mention &m : doc.sentences[s].entities) {
        keys.insert(MakeEntityKey(doc.doc_key, s, m, typed));
      }
    }
  }
  return keys;
}

inline std::set<RelationKey> RelationKeySet(
    const Corpus &corpus, bool typed_args,
    const std::set<std::string> &symmetric_types = {}) {
  RequireWellFormed(corpus);
  std::set<RelationKey> keys;
  for (const Document &doc : corpus.docs) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      const Sentence &sent = doc.sentences[s];
      for (const RelationMention &rel : sent.relations) {
        RelationKey key{doc.doc_key, s, rel.type,
                        MakeEntityKey(doc.doc_key, s,
                                      *sent.FindEntity(rel.head), typed_args),
                        MakeEntityKey(doc.doc_key, s,
                                      *sent.FindEntity(rel.tail), typed_args)};
        if (symmetric_types.contains(rel.type)) {
          CanonicalizeSymmetric(key.head, key.tail);
        }
        keys.insert(std::move(key));
      }
    }
  }
  return keys;
}

// Sorted, deduplicated entity / relation type inventories.
inline std::set<std::string> EntityTypes(const Corpus &corpus) {
  std::set<std::string> types;
  for (const Document &doc : corpus.docs)
    for (const Sentence &sent : doc.sentences)
      for (const Mention &m : sent.entities) types.insert(m.type);
  return types;
}

inline std::set<std::string> RelationTypes(const Corpus &corpus) {
  std::set<std::string> types;
  for (const Document &doc : corpus.docs)
    for (const Sentence &sent : doc.sentences)
      for (const RelationMention &r : sent.relations) types.insert(r.type);
  return types;
}

}  // namespace sincere

#endif  // SINCERE_CORE_MODEL_HPP_
