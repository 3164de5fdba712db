// Copyright 2026 The CTA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <filesystem>
#include <set>

#include "cta/common/rng.h"
#include "cta/common/text.h"
#include "cta/dict_replacer/dict_replacer.h"
#include "cta/reranker/reranker.h"
#include "cta/table/dataset_io.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace cta {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

const std::filesystem::path kData(CTA_TESTDATA_DIR);

EmbeddingStore SmallStore() {
  return *EmbeddingStore::ParseText(
      "6 2\nscore 1 0\nmark 3 4\ngrade 1 1\nrank 0 2\nresult 2 0\n"
      "exam_score 1 0.5\n",
      "small");
}

PoolColumn Pool(std::string table, std::string name) {
  return {std::move(table), Column{.name = std::move(name)}};
}

std::vector<std::string> Names(const std::vector<RankedCandidate>& ranked) {
  std::vector<std::string> names;
  for (const auto& c : ranked) names.push_back(c.name);
  return names;
}

TEST(RerankTest, HandComputedOrder) {
  const EmbeddingStore store = SmallStore();
  const std::vector<PoolColumn> pool = {Pool("a", "Mark"), Pool("b", "Grade"),
                                        Pool("c", "Rank")};
  auto ranked = Rerank({.name = "Score"}, "student", pool, store);
  ASSERT_TRUE(ranked.ok()) << ranked.status();
  // cos((1,0),(1,1)) = 1/sqrt(2); cos((1,0),(3,4)) = 3/5; cos((1,0),(0,2)) = 0.
  EXPECT_THAT(Names(*ranked), ElementsAre("Grade", "Mark", "Rank"));
  EXPECT_NEAR((*ranked)[0].similarity, 0.70710678118654752, 1e-12);
  EXPECT_NEAR((*ranked)[1].similarity, 0.6, 1e-12);
  EXPECT_NEAR((*ranked)[2].similarity, 0.0, 1e-12);
  EXPECT_EQ((*ranked)[1].source_table_id, "a");
  EXPECT_EQ((*ranked)[1].provenance, CandidateSource::kRetrieved);
}

TEST(RerankTest, ExcludesTargetNameAndOovCandidates) {
  const EmbeddingStore store = SmallStore();
  const std::vector<PoolColumn> pool = {Pool("a", " score "),
                                        Pool("b", "SCORE"), Pool("c", "zqxwv"),
                                        Pool("d", "Result")};
  auto ranked = Rerank({.name = "Score"}, "", pool, store);
  ASSERT_TRUE(ranked.ok());
  EXPECT_THAT(Names(*ranked), ElementsAre("Result"));
}

TEST(RerankTest, DeduplicatesKeepingTheBest) {
  const EmbeddingStore store = SmallStore();
  const std::vector<PoolColumn> pool = {Pool("z", "Grade"), Pool("b", "grade"),
                                        Pool("a", "GRADE")};
  auto ranked = Rerank({.name = "Score"}, "", pool, store);
  ASSERT_TRUE(ranked.ok());
  ASSERT_EQ(ranked->size(), 1u);
  EXPECT_EQ((*ranked)[0].name, "GRADE");
  EXPECT_EQ((*ranked)[0].source_table_id, "a");
}

TEST(RerankTest, UnembeddableTargetIsAnError) {
  const EmbeddingStore store = SmallStore();
  const std::vector<PoolColumn> pool = {Pool("a", "Mark")};
  EXPECT_EQ(Rerank({.name = "zqxwv"}, "", pool, store).status().code(),
            absl::StatusCode::kNotFound);
  EXPECT_THAT(*Rerank({.name = "Score"}, "", {}, store), IsEmpty());
}

class CorpusPoolTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto corpus = LoadDataset(kData / "retrieval" / "corpus_100.jsonl",
                              DatasetFormat::kSingleTable);
    ASSERT_TRUE(corpus.ok()) << corpus.status();
    for (const Database& db : corpus->databases) {
      for (const Table& table : db.tables) {
        for (const Column& column : table.columns) {
          pool_.push_back({table.table_id, column});
        }
      }
    }
    auto store =
        EmbeddingStore::LoadText(kData / "embeddings" / "vectors_1k.txt");
    ASSERT_TRUE(store.ok());
    store_.emplace(*std::move(store));
  }

  // Scores every pool entry, keeps each name's best, sorts everything.
  std::vector<std::pair<double, std::string>> Oracle(const Column& target) {
    const Vector t = *store_->LookupPhrase(target.name);
    std::map<std::string, std::pair<double, std::string>> best;
    for (const PoolColumn& item : pool_) {
      if (NameKey(item.column.name) == NameKey(target.name)) continue;
      auto v = store_->LookupPhrase(item.column.name);
      if (!v) continue;
      const double s = *Cosine(t, *v);
      auto& slot = best[NameKey(item.column.name)];
      if (slot.second.empty() || s > slot.first) slot = {s, item.column.name};
    }
    std::vector<std::pair<double, std::string>> all;
    for (auto& [key, entry] : best) all.push_back(entry);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    return all;
  }

  std::vector<PoolColumn> pool_;
  std::optional<EmbeddingStore> store_;
};

TEST_F(CorpusPoolTest, TopTwentyMatchesFullSort) {
  for (const char* name : {"Score", "Citizenship", "Runner-up", "Amount",
                           "Height", "Student Name", "Year"}) {
    const Column target{.name = name};
    auto ranked = Rerank(target, "", pool_, *store_, 20);
    ASSERT_TRUE(ranked.ok()) << name;
    auto oracle = Oracle(target);
    oracle.resize(std::min<size_t>(20, oracle.size()));
    ASSERT_EQ(ranked->size(), oracle.size()) << name;
    for (size_t i = 0; i < oracle.size(); ++i) {
      EXPECT_EQ((*ranked)[i].name, oracle[i].second) << name << " #" << i;
      EXPECT_EQ((*ranked)[i].similarity, oracle[i].first) << name << " #" << i;
    }
  }
}

TEST_F(CorpusPoolTest, OutputIsSortedAndDuplicateFree) {
  auto ranked = Rerank({.name = "Citizenship"}, "student", pool_, *store_);
  ASSERT_TRUE(ranked.ok());
  std::set<std::string> keys;
  for (size_t i = 0; i < ranked->size(); ++i) {
    EXPECT_TRUE(keys.insert(NameKey((*ranked)[i].name)).second);
    EXPECT_GE((*ranked)[i].similarity, -1.0);
    EXPECT_LE((*ranked)[i].similarity, 1.0);
    if (i > 0) {
      EXPECT_GE((*ranked)[i - 1].similarity, (*ranked)[i].similarity);
    }
  }
}

TEST_F(CorpusPoolTest, AddingAWeakerCandidateChangesNothing) {
  const Column target{.name = "Score"};
  const auto before = *Rerank(target, "", pool_, *store_, 10);
  ASSERT_EQ(before.size(), 10u);
  // "filler0003" is far from every score word in the fixture vectors.
  const double weak =
      *Cosine(*store_->Lookup("score"), *store_->Lookup("filler0003"));
  ASSERT_LT(weak, before.back().similarity);
  pool_.push_back(Pool("extra", "filler0003"));
  EXPECT_EQ(*Rerank(target, "", pool_, *store_, 10), before);
}

TEST_F(CorpusPoolTest, TwentyCandidatesFeedAnnotation) {
  // Enough distinct vocabulary for a full list of twenty.
  for (int i = 0; i < 30; ++i) {
    pool_.push_back(Pool("fill", "filler" + std::string(i < 10 ? "000" : "00") +
                                     std::to_string(i)));
  }
  auto ranked = Rerank({.name = "Score"}, "", pool_, *store_);
  ASSERT_TRUE(ranked.ok());
  EXPECT_EQ(ranked->size(), kDefaultRerankK);
  EXPECT_EQ(kDefaultRerankK, 20u);
}

SynonymDictionary SongDictionary() {
  return *SynonymDictionary::FromMap({{"song", {"track"}}, {"name", {"title"}}});
}

TEST(SynonymDictionaryTest, LoadsFixture) {
  auto dictionary =
      SynonymDictionary::Load(kData / "dictionary" / "synonyms.json");
  ASSERT_TRUE(dictionary.ok()) << dictionary.status();
  EXPECT_EQ(dictionary->size(), 20u);
  EXPECT_THAT(*dictionary->Find("HEIGHT"),
              ElementsAre("stature", "altitude", "tallness"));
  EXPECT_EQ(dictionary->Find("zqxwv"), nullptr);
}

TEST(SynonymDictionaryTest, RejectsInvariantViolations) {
  EXPECT_FALSE(SynonymDictionary::Parse(R"({"a": ["A"]})", "x").ok());
  EXPECT_FALSE(SynonymDictionary::Parse(R"({"a": ["b", "B "]})", "x").ok());
  EXPECT_FALSE(
      SynonymDictionary::Parse(R"({"a": ["b"], "A": ["c"]})", "x").ok());
  EXPECT_FALSE(SynonymDictionary::Parse(R"({"a": "b"})", "x").ok());
  EXPECT_FALSE(SynonymDictionary::Parse("[1]", "x").ok());
  EXPECT_EQ(SynonymDictionary::Load(kData / "absent.json").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(GenerateWordLevelTest, NoEntryYieldsNothingAfterRepeats) {
  Rng rng(1);
  SamplerStats stats;
  EXPECT_THAT(GenerateWordLevel({.name = "ID"}, SongDictionary(), rng, {},
                                &stats),
              IsEmpty());
  EXPECT_EQ(stats.samples, 5u);
  EXPECT_EQ(stats.repeats, 5u);
  EXPECT_EQ(stats.draw_events, 0u);
}

// Every non-identity combination of per-word choices, built independently.
TEST(GenerateWordLevelTest, OutcomesMatchEnumeration) {
  const std::vector<std::vector<std::string>> options = {{"song", "track"},
                                                         {"name", "title"}};
  std::set<std::string> expected;
  for (const auto& first : options[0]) {
    for (const auto& second : options[1]) expected.insert(first + " " + second);
  }
  expected.erase("song name");
  ASSERT_EQ(expected.size(), 3u);

  std::set<std::string> seen;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    for (const std::string& candidate :
         GenerateWordLevel({.name = "song name"}, SongDictionary(), rng)) {
      EXPECT_TRUE(expected.contains(candidate)) << candidate;
      seen.insert(candidate);
    }
  }
  EXPECT_EQ(seen, expected);
}

TEST(GenerateWordLevelTest, KeepsSeparatorsAndDictionaryCasing) {
  auto dictionary = SynonymDictionary::FromMap({{"runner", {"Competitor"}}});
  ASSERT_TRUE(dictionary.ok());
  Rng rng(3);
  EXPECT_THAT(GenerateWordLevel({.name = "Runner-up"}, *dictionary, rng),
              ElementsAre("Competitor-up"));
}

TEST(GenerateWordLevelTest, DeterministicPerSeed) {
  auto dictionary =
      SynonymDictionary::Load(kData / "dictionary" / "synonyms.json");
  ASSERT_TRUE(dictionary.ok());
  const Column target{.name = "Student exam score"};
  Rng a(7), b(7);
  const auto first = GenerateWordLevel(target, *dictionary, a);
  EXPECT_EQ(first, GenerateWordLevel(target, *dictionary, b));
  EXPECT_FALSE(first.empty());
}

TEST(GenerateWordLevelTest, RespectsBoundsAndNeverReturnsTarget) {
  auto dictionary =
      SynonymDictionary::Load(kData / "dictionary" / "synonyms.json");
  ASSERT_TRUE(dictionary.ok());
  for (const char* name : {"Student exam score", "song name", "Runner-up",
                           "Order amount", "team position year"}) {
    for (size_t max : {1u, 3u, 20u}) {
      Rng rng(StableHash(name) + max);
      const auto out = GenerateWordLevel({.name = name}, *dictionary, rng,
                                         {.max_candidates = max});
      EXPECT_LE(out.size(), max);
      std::set<std::string> keys;
      for (const auto& candidate : out) {
        EXPECT_NE(NameKey(candidate), NameKey(name));
        EXPECT_TRUE(keys.insert(NameKey(candidate)).second);
      }
    }
  }
}

TEST(GenerateWordLevelTest, KeepRateMatchesProbability) {
  auto dictionary =
      SynonymDictionary::Load(kData / "dictionary" / "synonyms.json");
  ASSERT_TRUE(dictionary.ok());
  SamplerStats stats;
  for (uint64_t seed = 0; seed < 400; ++seed) {
    Rng rng(seed);
    GenerateWordLevel({.name = "Student exam score"}, *dictionary, rng, {},
                      &stats);
  }
  ASSERT_GE(stats.draw_events, 10000u);
  const double rate =
      static_cast<double>(stats.kept) / static_cast<double>(stats.draw_events);
  EXPECT_GE(rate, 0.23);
  EXPECT_LE(rate, 0.27);
}

}  // namespace
}  // namespace cta
