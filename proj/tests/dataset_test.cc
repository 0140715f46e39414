#include "zsp/dataset.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "zsp/errors.h"
#include "zsp/execute.h"

namespace zsp::pipeline {
namespace {

const std::string kFixture = std::string(ZSP_SOURCE_DIR) + "/data/synth";

constexpr const char* kTwoRecords =
    R"json({"id": "c-1", "domain": "calendar", "logical_form": "(type Meeting)", "tokens": [{"surface": "Meetings", "lemma": "meeting", "pos": "NOUN"}]}
{"id": "c-2", "domain": "calendar", "logical_form": "(compare < (countrev Attendee) (num 3))", "tokens": [{"surface": "three", "lemma": "three", "pos": "NUM", "value": "3"}, {"surface": "2018", "lemma": "2018", "pos": "DATE", "value": "2018"}]}
)json";

TEST(ParseExamples, ReadsTokensAndValues) {
  auto examples = parseExamples(kTwoRecords, "inline");
  ASSERT_EQ(examples.size(), 2u);
  EXPECT_EQ(examples[0].id, "c-1");
  EXPECT_EQ(examples[0].tokens[0].pos, delex::Pos::kNoun);
  EXPECT_EQ(examples[1].tokens[0].value, kb::Value(Rational(3)));
  EXPECT_EQ(examples[1].tokens[1].value, kb::Value(Date{2018, 0, 0}));
  EXPECT_EQ(surfaces(examples[0]), (std::vector<std::string>{"Meetings"}));
  EXPECT_EQ(lemmas(examples[0]), (std::vector<std::string>{"meeting"}));
  EXPECT_EQ(parseExamples(exampleJson(examples[1]), "again")[0].lf, examples[1].lf);
}

TEST(ParseExamples, ReportsLineOfBadRecord) {
  std::string text = std::string(kTwoRecords) +
                     R"json({"id": "c-3", "domain": "calendar", "logical_form": "(type", "tokens": []})json";
  try {
    parseExamples(text, "broken.jsonl");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parseExamples("{\"id\": 3}", "x"), FormatError);
  EXPECT_THROW(parseExamples("not json", "x"), FormatError);
  EXPECT_THROW(
      parseExamples(R"json({"id": "a", "domain": "d", "logical_form": "(type A)", "tokens": [{"surface": "x", "lemma": "x", "pos": "WHAT"}]})json",
                    "x"),
      FormatError);
}

TEST(LoadDataset, GroupsByDomainAndWarnsOnEmptyFiles) {
  auto dir = std::filesystem::temp_directory_path() / "zsp_dataset_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.jsonl") << kTwoRecords;
  std::ofstream(dir / "empty.jsonl").flush();
  ::testing::internal::CaptureStderr();
  auto grouped = loadDataset({(dir / "a.jsonl").string(), (dir / "empty.jsonl").string()});
  std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_NE(err.find("empty.jsonl"), std::string::npos);
  ASSERT_EQ(grouped.size(), 1u);
  EXPECT_EQ(grouped["calendar"].size(), 2u);
  EXPECT_THROW(loadExamples((dir / "missing.jsonl").string()), FormatError);
}

TEST(Splits, HashIsFnv1a) {
  EXPECT_EQ(stableHash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(stableHash("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(stableHash("foobar"), 0x85944171f73967e8ULL);
}

TEST(Splits, ProportionsAndStability) {
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 10000; ++i) {
    std::string id = "ex-" + std::to_string(i);
    Split s = splitOf(id);
    EXPECT_EQ(s, splitOf(id));
    ++counts[static_cast<int>(s)];
  }
  EXPECT_NEAR(counts[static_cast<int>(Split::kTest)] / 10000.0, 0.2, 0.02);
  EXPECT_NEAR(counts[static_cast<int>(Split::kDev)] / 10000.0, 0.16, 0.02);
}

TEST(Corpus, FixtureLoads) {
  Corpus corpus = loadCorpus(kFixture, {"calendar", "housing", "publications", "recipes",
                                        "restaurants", "social"});
  EXPECT_EQ(corpus.domains.size(), 6u);
  for (const auto& d : corpus.domains) {
    EXPECT_EQ(d.examples.size(), 300u) << d.name;
    EXPECT_EQ(d.kb.kb.domain(), d.name);
    std::size_t total = 0;
    for (Split s : {Split::kTrain, Split::kDev, Split::kTest}) total += selectSplit(d, s).size();
    EXPECT_EQ(total, d.examples.size());
    for (const auto& ex : d.examples) {
      ASSERT_TRUE(lf::execute(ex.lf, d.kb.kb).ok()) << ex.id;
    }
  }
  EXPECT_GT(corpus.embeddings.size(), 100u);
  EXPECT_EQ(corpus.domain("recipes").name, "recipes");
  EXPECT_THROW(corpus.domain("weather"), ConfigError);
  EXPECT_THROW(loadCorpus(kFixture, {"weather"}), FormatError);
}

}  // namespace
}  // namespace zsp::pipeline
