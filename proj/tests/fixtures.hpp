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

// Test corpora: tiny hand-built fixtures plus deterministic generators for
// dataset-shaped corpora and random property-test inputs.

#ifndef SINCERE_TESTS_FIXTURES_HPP_
#define SINCERE_TESTS_FIXTURES_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "sincere/sincere.hpp"

namespace sincere::testing {

inline std::vector<std::string> Tokens(std::size_t n,
                                       const std::string &prefix = "w") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline Sentence MakeSentence(std::size_t n_tokens, std::vector<Mention> ents,
                             std::vector<RelationMention> rels = {}) {
  return Sentence{Tokens(n_tokens), std::move(ents), std::move(rels)};
}

inline Corpus OneDoc(std::vector<Sentence> sentences,
                     const std::string &name = "fixture") {
  Corpus c;
  c.name = name;
  c.docs.push_back({"doc0", std::move(sentences)});
  return c;
}

inline Corpus OneSentence(Sentence s) { return OneDoc({std::move(s)}); }

// Copy of `c` with all annotations removed.
inline Corpus Stripped(Corpus c) {
  for (Document &d : c.docs)
    for (Sentence &s : d.sentences) {
      s.entities.clear();
      s.relations.clear();
    }
  return c;
}

struct TypedPair {
  std::string relation;
  std::string head;
  std::string tail;
};

// CoNLL04's five relation types, each with a single argument-type pair.
inline std::vector<TypedPair> Conll04Mapping() {
  return {{"Work_For", "Peop", "Org"},
          {"Kill", "Peop", "Peop"},
          {"OrgBased_In", "Org", "Loc"},
          {"Live_In", "Peop", "Loc"},
          {"Located_In", "Loc", "Loc"}};
}

struct ShapeSpec {
  std::string name;
  std::string split;
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t entities = 0;
  std::size_t relations = 0;
};

// One sentence per document; every sentence gets at least one relation, so
// the corpus is all-relational. Counts are hit exactly. Entities are
// single tokens at even positions; relation k links entities 2k and 2k+1
// and draws its types from `mapping` round-robin.
inline Corpus MakeShapedCorpus(const ShapeSpec &spec,
                               const std::vector<TypedPair> &mapping,
                               const std::string &filler_type = "Other") {
  const std::size_t n = spec.sentences;
  if (n == 0 || spec.relations < n || spec.entities < 2 * n) {
    throw std::invalid_argument("shape needs >= 1 relation, 2 entities per sentence");
  }
  const std::size_t base_e = spec.entities / n, extra_e = spec.entities % n;
  const std::size_t base_r = spec.relations / n, extra_r = spec.relations % n;
  const std::size_t base_t = spec.tokens / n, extra_t = spec.tokens % n;
  Corpus c;
  c.name = spec.name;
  c.split = spec.split;
  std::size_t rel_counter = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t e = base_e + (i < extra_e ? 1 : 0);
    const std::size_t r = base_r + (i < extra_r ? 1 : 0);
    const std::size_t t = base_t + (i < extra_t ? 1 : 0);
    if (e < 2 * r || t < 2 * e) {
      throw std::invalid_argument("shape not realizable in sentence " +
                                  std::to_string(i));
    }
    Sentence s;
    s.tokens = Tokens(t, "t" + std::to_string(i) + "_");
    for (std::size_t k = 0; k < e; ++k) {
      s.entities.push_back({"e" + std::to_string(k), 2 * k, 2 * k + 1, filler_type});
    }
    for (std::size_t k = 0; k < r; ++k) {
      const TypedPair &tp = mapping[rel_counter++ % mapping.size()];
      s.entities[2 * k].type = tp.head;
      s.entities[2 * k + 1].type = tp.tail;
      s.relations.push_back({"e" + std::to_string(2 * k),
                             "e" + std::to_string(2 * k + 1), tp.relation});
    }
    c.docs.push_back({spec.split + "-" + std::to_string(i), {std::move(s)}});
  }
  return c;
}

// Published split sizes of the SpERT-preprocessed CoNLL04 release.
inline std::vector<Corpus> Conll04ShapedSplits() {
  return {MakeShapedCorpus({"conll04", "train", 922, 26525, 3377, 1283},
                           Conll04Mapping()),
          MakeShapedCorpus({"conll04", "dev", 231, 6993, 893, 343},
                           Conll04Mapping()),
          MakeShapedCorpus({"conll04", "test", 288, 8336, 1079, 422},
                           Conll04Mapping())};
}

// PART-WHOLE fitting nine argument-type pairs, as on ACE05.
inline std::vector<TypedPair> PartWholeNinePairs() {
  return {{"PART-WHOLE", "FAC", "FAC"}, {"PART-WHOLE", "FAC", "GPE"},
          {"PART-WHOLE", "GPE", "GPE"}, {"PART-WHOLE", "LOC", "GPE"},
          {"PART-WHOLE", "LOC", "LOC"}, {"PART-WHOLE", "ORG", "ORG"},
          {"PART-WHOLE", "ORG", "GPE"}, {"PART-WHOLE", "VEH", "VEH"},
          {"PART-WHOLE", "WEA", "WEA"}};
}

inline Corpus PartWholeFixture() {
  std::vector<Sentence> sents;
  for (const TypedPair &tp : PartWholeNinePairs()) {
    sents.push_back(MakeSentence(
        5, {{"e0", 0, 1, tp.head}, {"e1", 3, 5, tp.tail}},
        {{"e0", "e1", tp.relation}}));
  }
  return OneDoc(std::move(sents), "part-whole");
}

// ACE05-like: seven entity types, non-bijective relation mapping, and a
// majority of sentences without relations (most without entities either).
inline Corpus AceShapedFixture(std::size_t docs = 4,
                               std::size_t sentences_per_doc = 10,
                               std::uint64_t seed = 5) {
  static const std::vector<std::string> kTypes = {"PER", "ORG", "GPE", "LOC",
                                                  "FAC", "VEH", "WEA"};
  std::vector<TypedPair> mapping = PartWholeNinePairs();
  for (const TypedPair &tp :
       std::vector<TypedPair>{{"ORG-AFF", "PER", "ORG"},
                              {"ORG-AFF", "PER", "GPE"},
                              {"ORG-AFF", "ORG", "GPE"},
                              {"PHYS", "PER", "LOC"},
                              {"PHYS", "PER", "GPE"},
                              {"PHYS", "PER", "FAC"},
                              {"GEN-AFF", "PER", "GPE"},
                              {"GEN-AFF", "PER", "PER"},
                              {"PER-SOC", "PER", "PER"},
                              {"ART", "PER", "WEA"},
                              {"ART", "GPE", "VEH"}}) {
    mapping.push_back(tp);
  }
  std::mt19937_64 rng(seed);
  Corpus c;
  c.name = "ace05-shaped";
  for (std::size_t d = 0; d < docs; ++d) {
    Document doc{"ace-" + std::to_string(d), {}};
    for (std::size_t s = 0; s < sentences_per_doc; ++s) {
      Sentence sent;
      sent.tokens = Tokens(16);
      const unsigned roll = static_cast<unsigned>(rng() % 10);
      if (roll < 5) {
        // no entities, no relations
      } else if (roll < 7) {
        sent.entities.push_back({"e0", 2, 4, kTypes[rng() % kTypes.size()]});
      } else {
        const std::size_t n_rel = 1 + rng() % 2;
        for (std::size_t k = 0; k < n_rel; ++k) {
          const TypedPair &tp = mapping[rng() % mapping.size()];
          const std::size_t base = 6 * k;
          std::string h = "e" + std::to_string(2 * k);
          std::string t = "e" + std::to_string(2 * k + 1);
          sent.entities.push_back({h, base, base + 1 + rng() % 2, tp.head});
          sent.entities.push_back({t, base + 3, base + 4 + rng() % 2, tp.tail});
          sent.relations.push_back({h, t, tp.relation});
        }
      }
      doc.sentences.push_back(std::move(sent));
    }
    c.docs.push_back(std::move(doc));
  }
  return c;
}

// Drops every sentence without relations, renumbering within documents.
inline Corpus DropRelationFree(const Corpus &c) {
  Corpus out = c;
  for (Document &d : out.docs) {
    std::erase_if(d.sentences,
                  [](const Sentence &s) { return s.relations.empty(); });
  }
  std::erase_if(out.docs, [](const Document &d) { return d.sentences.empty(); });
  return out;
}

// Random well-formed corpus for property tests. Mentions may overlap, nest,
// or share a span with a different type.
inline Corpus RandomCorpus(std::mt19937_64 &rng, std::size_t max_sentences = 6) {
  static const std::vector<std::string> kEnt = {"A", "B", "C"};
  static const std::vector<std::string> kRel = {"R1", "R2", "R3"};
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  Corpus c;
  c.name = "random";
  const std::size_t n_docs = 1 + pick(2);
  for (std::size_t d = 0; d < n_docs; ++d) {
    Document doc{"d" + std::to_string(d), {}};
    const std::size_t n_sent = 1 + pick(max_sentences);
    for (std::size_t s = 0; s < n_sent; ++s) {
      Sentence sent;
      const std::size_t n_tok = 2 + pick(11);
      sent.tokens = Tokens(n_tok);
      const std::size_t n_ent = pick(6);
      for (std::size_t e = 0; e < n_ent; ++e) {
        const std::size_t start = pick(n_tok);
        const std::size_t len = 1 + pick(std::min<std::size_t>(3, n_tok - start));
        sent.entities.push_back(
            {"e" + std::to_string(e), start, start + len, kEnt[pick(kEnt.size())]});
      }
      if (n_ent >= 2) {
        const std::size_t n_rel = pick(4);
        for (std::size_t r = 0; r < n_rel; ++r) {
          const std::size_t h = pick(n_ent);
          std::size_t t = pick(n_ent - 1);
          if (t >= h) ++t;
          sent.relations.push_back({"e" + std::to_string(h), "e" + std::to_string(t),
                                    kRel[pick(kRel.size())]});
        }
      }
      doc.sentences.push_back(std::move(sent));
    }
    c.docs.push_back(std::move(doc));
  }
  return c;
}

inline PerturbationProfile RandomProfile(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.0, 0.6);
  PerturbationProfile p;
  p.seed = rng();
  p.p_ent_type_swap = u(rng);
  p.p_ent_boundary_shift = u(rng);
  p.p_ent_drop = u(rng) / 2;
  p.p_ent_spurious = u(rng);
  p.p_rel_type_swap = u(rng) / 2;
  p.p_rel_drop = u(rng) / 2;
  p.p_rel_spurious = u(rng);
  p.max_spurious_len = 1 + rng() % 3;
  return p;
}

// Scratch directory unique to the running test binary.
inline std::filesystem::path ScratchDir(const std::string &tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("sincere-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sincere::testing

#endif  // SINCERE_TESTS_FIXTURES_HPP_
