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

// Seeded error injection: turns a gold corpus into a synthetic prediction
// corpus with controlled entity and relation error rates, so that metric
// gaps can be measured without training a model.
//
// Randomness is drawn from a stream keyed by (seed, lane, document index,
// sentence index, annotation index). Each annotation's fate therefore does
// not depend on iteration order or on which other perturbations fired.

#ifndef SINCERE_PERTURB_HPP_
#define SINCERE_PERTURB_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sincere/audit.hpp"
#include "sincere/core_model.hpp"
#include "sincere/ingest.hpp"
#include "sincere/scoring.hpp"
#include "sincere/stats.hpp"

namespace sincere {

struct PerturbationProfile {
  std::uint64_t seed = 0;
  double p_ent_type_swap = 0.0;
  double p_ent_boundary_shift = 0.0;
  double p_ent_drop = 0.0;
  double p_ent_spurious = 0.0;
  double p_rel_type_swap = 0.0;
  double p_rel_drop = 0.0;
  double p_rel_spurious = 0.0;
  std::size_t max_spurious_len = 3;
  // When an argument's type is swapped, relabel the relation to the type
  // the gold relation/argument-type mapping assigns to the new argument
  // types (or drop it when no single relation type fits).
  bool mapping_consistent_swaps = false;

  void Validate() const {
    const std::pair<const char *, double> probs[] = {
        {"p_ent_type_swap", p_ent_type_swap},
        {"p_ent_boundary_shift", p_ent_boundary_shift},
        {"p_ent_drop", p_ent_drop},
        {"p_ent_spurious", p_ent_spurious},
        {"p_rel_type_swap", p_rel_type_swap},
        {"p_rel_drop", p_rel_drop},
        {"p_rel_spurious", p_rel_spurious}};
    for (const auto &[name, p] : probs) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(std::string(name) + " must be in [0, 1], got " +
                    std::to_string(p));
      }
    }
    if (max_spurious_len == 0) throw Error("max_spurious_len must be positive");
  }
  friend bool operator==(const PerturbationProfile &,
                         const PerturbationProfile &) = default;
};

namespace internal {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Lane : std::uint64_t {
  kEntity = 1,
  kRelation = 2,
  kSpuriousEntity = 3,
  kSpuriousRelation = 4,
};

// Independent random stream for one annotation.
class AnnotationStream {
 public:
  AnnotationStream(std::uint64_t seed, Lane lane, std::size_t doc,
                   std::size_t sentence, std::size_t index) {
    std::uint64_t h = SplitMix64(seed);
    for (std::uint64_t part : {static_cast<std::uint64_t>(lane),
                               static_cast<std::uint64_t>(doc),
                               static_cast<std::uint64_t>(sentence),
                               static_cast<std::uint64_t>(index)}) {
      h = SplitMix64(h ^ part);
    }
    engine_.seed(h);
  }

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n); n > 0.
  std::size_t Index(std::size_t n) {
    auto i = static_cast<std::size_t>(Uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

template <typename T>
std::vector<T> OthersThan(const std::set<T> &all, const T &current) {
  std::vector<T> out;
  for (const T &x : all)
    if (x != current) out.push_back(x);
  return out;
}

inline std::string FreshId(const Sentence &sent, const std::string &base) {
  std::string id = base;
  for (std::size_t k = 1; sent.FindEntity(id) != nullptr; ++k) {
    id = base + "_" + std::to_string(k);
  }
  return id;
}

}  // namespace internal

inline Corpus Perturb(const Corpus &gold, const PerturbationProfile &profile) {
  RequireWellFormed(gold);
  profile.Validate();
  using internal::AnnotationStream;
  using internal::Lane;

  const std::set<std::string> entity_types = EntityTypes(gold);
  const std::set<std::string> relation_types = RelationTypes(gold);
  // (head type, tail type) -> relation type, for pairs used by exactly one
  // relation type in gold.
  std::map<std::pair<std::string, std::string>, std::set<std::string>> users;
  if (profile.mapping_consistent_swaps) {
    for (const auto &[key, n] : CooccurrenceMatrix(gold)) {
      users[{key.head_type, key.tail_type}].insert(key.relation_type);
    }
  }

  Corpus out;
  out.name = gold.name;
  out.split = gold.split;
  out.docs.reserve(gold.docs.size());
  for (std::size_t d = 0; d < gold.docs.size(); ++d) {
    const Document &gdoc = gold.docs[d];
    Document pdoc;
    pdoc.doc_key = gdoc.doc_key;
    for (std::size_t s = 0; s < gdoc.sentences.size(); ++s) {
      const Sentence &gs = gdoc.sentences[s];
      Sentence ps;
      ps.tokens = gs.tokens;
      const std::size_t n_tokens = gs.tokens.size();
      std::set<std::string> swapped;

      for (std::size_t i = 0; i < gs.entities.size(); ++i) {
        Mention m = gs.entities[i];
        AnnotationStream rng(profile.seed, Lane::kEntity, d, s, i);
        const double u_drop = rng.Uniform();
        const double u_swap = rng.Uniform();
        const double u_shift = rng.Uniform();
        if (u_drop < profile.p_ent_drop) continue;
        if (u_swap < profile.p_ent_type_swap) {
          std::vector<std::string> others =
              internal::OthersThan(entity_types, m.type);
          if (!others.empty()) {
            m.type = others[rng.Index(others.size())];
            swapped.insert(m.id);
          }
        } else if (u_shift < profile.p_ent_boundary_shift) {
          const bool move_end = rng.Index(2) == 1;
          const bool grow = rng.Index(2) == 1;
          std::size_t start = m.start, end = m.end;
          if (move_end) {
            end = grow ? std::min(end + 1, n_tokens) : end - 1;
          } else {
            start = grow ? (start == 0 ? 0 : start - 1) : start + 1;
          }
          if (start < end) {
            m.start = start;
            m.end = end;
          }
        }
        ps.entities.push_back(std::move(m));
      }

      for (std::size_t j = 0; j < gs.relations.size(); ++j) {
        RelationMention r = gs.relations[j];
        const Mention *head = ps.FindEntity(r.head);
        const Mention *tail = ps.FindEntity(r.tail);
        if (head == nullptr || tail == nullptr) continue;
        AnnotationStream rng(profile.seed, Lane::kRelation, d, s, j);
        const double u_drop = rng.Uniform();
        const double u_swap = rng.Uniform();
        if (u_drop < profile.p_rel_drop) continue;
        if (profile.mapping_consistent_swaps &&
            (swapped.contains(r.head) || swapped.contains(r.tail))) {
          auto it = users.find({head->type, tail->type});
          if (it == users.end() || it->second.size() != 1) continue;
          r.type = *it->second.begin();
        } else if (u_swap < profile.p_rel_type_swap) {
          std::vector<std::string> others =
              internal::OthersThan(relation_types, r.type);
          if (!others.empty()) r.type = others[rng.Index(others.size())];
        }
        ps.relations.push_back(std::move(r));
      }

      if (!entity_types.empty()) {
        AnnotationStream rng(profile.seed, Lane::kSpuriousEntity, d, s, 0);
        if (rng.Uniform() < profile.p_ent_spurious) {
          std::set<std::pair<std::size_t, std::size_t>> taken;
          for (const Mention &m : gs.entities) taken.insert({m.start, m.end});
          for (const Mention &m : ps.entities) taken.insert({m.start, m.end});
          std::vector<std::pair<std::size_t, std::size_t>> spans;
          for (std::size_t a = 0; a < n_tokens; ++a) {
            for (std::size_t len = 1;
                 len <= profile.max_spurious_len && a + len <= n_tokens; ++len) {
              if (!taken.contains({a, a + len})) spans.emplace_back(a, a + len);
            }
          }
          if (!spans.empty()) {
            auto [a, b] = spans[rng.Index(spans.size())];
            std::vector<std::string> types(entity_types.begin(),
                                           entity_types.end());
            ps.entities.push_back({internal::FreshId(ps, "spurious"), a, b,
                                   types[rng.Index(types.size())]});
          }
        }
      }

      if (!relation_types.empty() && ps.entities.size() >= 2) {
        AnnotationStream rng(profile.seed, Lane::kSpuriousRelation, d, s, 0);
        if (rng.Uniform() < profile.p_rel_spurious) {
          const std::size_t n = ps.entities.size();
          const std::size_t h = rng.Index(n);
          std::size_t t = rng.Index(n - 1);
          if (t >= h) ++t;
          std::vector<std::string> types(relation_types.begin(),
                                         relation_types.end());
          ps.relations.push_back({ps.entities[h].id, ps.entities[t].id,
                                  types[rng.Index(types.size())]});
        }
      }
      pdoc.sentences.push_back(std::move(ps));
    }
    out.docs.push_back(std::move(pdoc));
  }
  return out;
}

struct SweepRow {
  PerturbationProfile profile;
  std::size_t replicates = 1;
  std::optional<GapReport> gap;
  std::optional<std::string> error;
};

// One row per profile. With replicates > 1 each row averages Strict and
// Boundaries RE F1 over seeds profile.seed, profile.seed + 1, ...
inline std::vector<SweepRow> Sweep(const Corpus &gold,
                                   const std::vector<PerturbationProfile> &grid,
                                   const ScoreConfig &config = {},
                                   std::size_t replicates = 1) {
  RequireWellFormed(gold);
  if (replicates == 0) throw Error("replicates must be positive");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const PerturbationProfile &profile : grid) {
    SweepRow row{profile, replicates, std::nullopt, std::nullopt};
    try {
      double strict = 0.0, bounds = 0.0;
      for (std::size_t r = 0; r < replicates; ++r) {
        PerturbationProfile p = profile;
        p.seed = profile.seed + r;
        GapReport g = Gap(gold, Perturb(gold, p), config);
        strict += g.strict_f1;
        bounds += g.boundaries_f1;
      }
      const double n = static_cast<double>(replicates);
      row.gap = GapFromScores(strict / n, bounds / n);
    } catch (const ScoringError &e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Serialization

inline void to_json(nlohmann::json &j, const PerturbationProfile &p) {
  j = {{"seed", p.seed},
       {"p_ent_type_swap", p.p_ent_type_swap},
       {"p_ent_boundary_shift", p.p_ent_boundary_shift},
       {"p_ent_drop", p.p_ent_drop},
       {"p_ent_spurious", p.p_ent_spurious},
       {"p_rel_type_swap", p.p_rel_type_swap},
       {"p_rel_drop", p.p_rel_drop},
       {"p_rel_spurious", p.p_rel_spurious},
       {"max_spurious_len", p.max_spurious_len},
       {"mapping_consistent_swaps", p.mapping_consistent_swaps}};
}

// Fields absent from `j` keep their current value, so a profile file can
// override a base profile.
inline void from_json(const nlohmann::json &j, PerturbationProfile &p) {
  if (!j.is_object()) throw Error("profile: expected object");
  static const std::set<std::string> known = {
      "seed",          "p_ent_type_swap", "p_ent_boundary_shift",
      "p_ent_drop",    "p_ent_spurious",  "p_rel_type_swap",
      "p_rel_drop",    "p_rel_spurious",  "max_spurious_len",
      "mapping_consistent_swaps"};
  for (const auto &[key, value] : j.items()) {
    if (!known.contains(key)) throw Error("profile: unknown field \"" + key + "\"");
  }
  p.seed = j.value("seed", p.seed);
  p.p_ent_type_swap = j.value("p_ent_type_swap", p.p_ent_type_swap);
  p.p_ent_boundary_shift = j.value("p_ent_boundary_shift", p.p_ent_boundary_shift);
  p.p_ent_drop = j.value("p_ent_drop", p.p_ent_drop);
  p.p_ent_spurious = j.value("p_ent_spurious", p.p_ent_spurious);
  p.p_rel_type_swap = j.value("p_rel_type_swap", p.p_rel_type_swap);
  p.p_rel_drop = j.value("p_rel_drop", p.p_rel_drop);
  p.p_rel_spurious = j.value("p_rel_spurious", p.p_rel_spurious);
  p.max_spurious_len = j.value("max_spurious_len", p.max_spurious_len);
  p.mapping_consistent_swaps =
      j.value("mapping_consistent_swaps", p.mapping_consistent_swaps);
}

inline PerturbationProfile ParseProfile(std::string_view text,
                                        PerturbationProfile base = {}) {
  try {
    nlohmann::json::parse(text.begin(), text.end()).get_to(base);
  } catch (const nlohmann::json::exception &e) {
    throw IngestError(IngestError::Kind::kSchema,
                      std::string("profile: ") + e.what());
  } catch (const Error &e) {
    throw IngestError(IngestError::Kind::kSchema, e.what());
  }
  base.Validate();
  return base;
}

struct SweepGrid {
  std::vector<PerturbationProfile> profiles;
  std::size_t replicates = 1;
};

// Either a bare array of profiles or {"replicates": n, "base": {...},
// "profiles": [...]}; entries override "base".
inline SweepGrid ParseSweepGrid(std::string_view text) {
  SweepGrid grid;
  try {
    nlohmann::json j = nlohmann::json::parse(text.begin(), text.end());
    PerturbationProfile base;
    const nlohmann::json *entries = &j;
    if (j.is_object()) {
      grid.replicates = j.value("replicates", std::size_t{1});
      if (j.contains("base")) j["base"].get_to(base);
      entries = &j.at("profiles");
    }
    if (!entries->is_array()) throw Error("expected array of profiles");
    for (const auto &e : *entries) {
      PerturbationProfile p = base;
      e.get_to(p);
      p.Validate();
      grid.profiles.push_back(p);
    }
  } catch (const nlohmann::json::exception &e) {
    throw IngestError(IngestError::Kind::kSchema,
                      std::string("sweep grid: ") + e.what());
  } catch (const IngestError &) {
    throw;
  } catch (const Error &e) {
    throw IngestError(IngestError::Kind::kSchema,
                      std::string("sweep grid: ") + e.what());
  }
  if (grid.replicates == 0) {
    throw IngestError(IngestError::Kind::kSchema,
                      "sweep grid: replicates must be positive");
  }
  return grid;
}

}  // namespace sincere

#endif  // SINCERE_PERTURB_HPP_
