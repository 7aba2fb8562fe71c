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

#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sincere/stats.hpp"

namespace sincere {
namespace {

using testing::MakeSentence;
using testing::OneDoc;

const std::string kDataDir = SINCERE_DATA_DIR;

TEST(ComputeStats, CountsAndHistograms) {
  Corpus c = OneDoc({MakeSentence(5, {{"a", 0, 1, "P"}, {"b", 2, 4, "O"}},
                                  {{"a", "b", "R"}}),
                     MakeSentence(3, {{"a", 0, 3, "P"}, {"b", 1, 2, "P"}}),
                     MakeSentence(2, {})});
  c.split = "dev";
  StatsReport r = ComputeStats(c);
  EXPECT_EQ(r.splits.at("dev").documents, 1u);
  EXPECT_EQ(r.splits.at("dev").sentences, 3u);
  EXPECT_EQ(r.splits.at("dev").tokens, 10u);
  EXPECT_EQ(r.splits.at("dev").entities, 4u);
  EXPECT_EQ(r.splits.at("dev").relations, 1u);
  EXPECT_EQ(r.entity_types.at("P"), 3u);
  EXPECT_EQ(r.relation_types.at("R"), 1u);
  EXPECT_EQ(r.entities_per_sentence, (Histogram{{0, 1}, {2, 2}}));
  EXPECT_EQ(r.relations_per_sentence, (Histogram{{0, 2}, {1, 1}}));
  EXPECT_EQ(r.zero_relation_sentences, 2u);
  EXPECT_EQ(r.nested_mentions, 1u);
  EXPECT_EQ(r.overlapping_mentions, 0u);
  EXPECT_EQ(r.cooccurrence.at({"R", "P", "O"}), 1u);
}

TEST(ComputeStats, CrossingSpansAreOverlappingNotNested) {
  Corpus c = OneDoc({MakeSentence(5, {{"a", 0, 3, "P"}, {"b", 2, 5, "P"}})});
  StatsReport r = ComputeStats(c);
  EXPECT_EQ(r.overlapping_mentions, 1u);
  EXPECT_EQ(r.nested_mentions, 0u);
}

TEST(ComputeStats, UnsplitCorpusIsReportedAsAll) {
  StatsReport r = ComputeStats(OneDoc({MakeSentence(2, {})}));
  EXPECT_TRUE(r.splits.contains("all"));
}

TEST(ComputeStats, MergeIsAssociativeOverSplits) {
  std::vector<Corpus> splits = testing::Conll04ShapedSplits();
  StatsReport merged = ComputeStats(splits);
  StatsReport by_hand;
  for (auto it = splits.rbegin(); it != splits.rend(); ++it) {
    MergeStats(by_hand, ComputeStats(*it));
  }
  EXPECT_EQ(merged, by_hand);
}

TEST(ComputeStats, ShapedConll04MatchesBundledManifest) {
  StatsReport r = ComputeStats(testing::Conll04ShapedSplits());
  ReferenceManifest m = ReadManifestFile(kDataDir + "/manifests/conll04.json");
  EXPECT_TRUE(CheckIntegrity(r, m).empty());
  EXPECT_EQ(r.total.sentences, 1441u);
  EXPECT_EQ(r.total.entities, 5349u);
  EXPECT_EQ(r.total.relations, 2048u);
  EXPECT_EQ(r.total.tokens, 41854u);
  EXPECT_EQ(r.zero_relation_sentences, 0u);
}

TEST(CheckIntegrity, AceRelationShortfall) {
  StatsReport r;
  r.splits["all"].relations = 6642;
  ReferenceManifest m;
  m.splits["all"].relations = 7105;
  auto d = CheckIntegrity(r, m);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], (Discrepancy{"all.relations", 7105, 6642, -463}));
}

TEST(CheckIntegrity, OneExtraSentence) {
  Corpus c = testing::AceShapedFixture(1, 3);
  StatsReport base = ComputeStats(c);
  ReferenceManifest m = ManifestOf(base);
  m.entity_types.reset();
  m.relation_types.reset();
  c.docs[0].sentences.push_back(MakeSentence(1, {}));
  auto d = CheckIntegrity(ComputeStats(c), m);
  ASSERT_EQ(d.size(), 2u);  // sentences and tokens
  EXPECT_EQ(d[0].field, "all.sentences");
  EXPECT_EQ(d[0].delta, 1);
  EXPECT_EQ(d[1].field, "all.tokens");
}

TEST(CheckIntegrity, ExactManifestHasNoDiscrepancies) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    StatsReport r = ComputeStats(testing::RandomCorpus(rng));
    EXPECT_TRUE(CheckIntegrity(r, ManifestOf(r)).empty());
  }
}

TEST(CheckIntegrity, MissingSplitAndTypeCounts) {
  StatsReport r = ComputeStats(testing::Conll04ShapedSplits()[0]);
  ReferenceManifest m = ManifestOf(r);
  m.splits["test"].sentences = 288;
  (*m.entity_types)["Misc"] = 2;
  auto d = CheckIntegrity(r, m);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].field, "test.sentences");
  EXPECT_EQ(d[0].delta, -288);
  EXPECT_EQ(d[1].field, "entity_types.Misc");
}

TEST(Manifest, JsonRoundTrip) {
  ReferenceManifest m = ReadManifestFile(kDataDir + "/manifests/ace05.json");
  EXPECT_FALSE(m.all_relational);
  EXPECT_EQ(m.splits.at("train").documents, 351u);
  ReferenceManifest again = ParseManifest(ManifestToJson(m).dump());
  EXPECT_EQ(ManifestToJson(again), ManifestToJson(m));
}

TEST(Manifest, RejectsNegativeCounts) {
  EXPECT_THROW(ParseManifest(R"({"splits": {"train": {"sentences": -1}}})"),
               IngestError);
  EXPECT_THROW(ParseManifest(R"([1, 2])"), IngestError);
}

TEST(DetectTruncation, RelationFilteredAceIsSuspicious) {
  Corpus ace = testing::AceShapedFixture();
  StatsReport full = ComputeStats(ace);
  EXPECT_FALSE(DetectTruncation(full, false).suspicious);
  EXPECT_GT(full.zero_relation_fraction(), 0.5);

  StatsReport truncated = ComputeStats(testing::DropRelationFree(ace));
  TruncationFinding f = DetectTruncation(truncated, false);
  EXPECT_TRUE(f.suspicious);
  EXPECT_EQ(f.zero_relation_fraction, 0.0);
}

TEST(DetectTruncation, AllRelationalDatasetIsNotFlagged) {
  StatsReport r = ComputeStats(testing::Conll04ShapedSplits());
  EXPECT_FALSE(DetectTruncation(r, true).suspicious);
  EXPECT_FALSE(DetectTruncation(r, std::nullopt).suspicious);
}

TEST(AnalyzeMapping, Conll04IsBijective) {
  MappingComplexity m =
      AnalyzeMapping(ComputeStats(testing::Conll04ShapedSplits()).cooccurrence);
  EXPECT_TRUE(m.bijective);
  EXPECT_EQ(m.pairs_per_relation.size(), 5u);
  for (const auto &[rel, n] : m.pairs_per_relation) EXPECT_EQ(n, 1u) << rel;
}

TEST(AnalyzeMapping, PartWholeHasNinePairs) {
  MappingComplexity m = AnalyzeMapping(CooccurrenceMatrix(testing::PartWholeFixture()));
  EXPECT_EQ(m.pairs_per_relation.at("PART-WHOLE"), 9u);
  EXPECT_FALSE(m.bijective);
}

TEST(AnalyzeMapping, SharedArgumentPairBreaksBijectivity) {
  Corpus c = OneDoc({MakeSentence(4, {{"a", 0, 1, "Peop"}, {"b", 2, 3, "Loc"}},
                                  {{"a", "b", "Live_In"}}),
                     MakeSentence(4, {{"a", 0, 1, "Peop"}, {"b", 2, 3, "Loc"}},
                                  {{"a", "b", "Born_In"}})});
  MappingComplexity m = AnalyzeMapping(CooccurrenceMatrix(c));
  EXPECT_EQ(m.pairs_per_relation.at("Live_In"), 1u);
  EXPECT_FALSE(m.bijective);
}

TEST(Format, HistogramTsvHasTwoBlocks) {
  std::string tsv = FormatHistogramsTsv(ComputeStats(testing::AceShapedFixture()));
  EXPECT_NE(tsv.find("# entities_per_sentence\n"), std::string::npos);
  EXPECT_NE(tsv.find("# relations_per_sentence\n"), std::string::npos);
  EXPECT_NE(tsv.find("\n0\t"), std::string::npos);
}

TEST(StatsReport, JsonRoundTrip) {
  StatsReport r = ComputeStats(testing::AceShapedFixture());
  nlohmann::json j = r;
  EXPECT_EQ(j.get<StatsReport>(), r);
}

}  // namespace
}  // namespace sincere
