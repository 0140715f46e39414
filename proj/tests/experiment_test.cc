#include "zsp/experiment.h"

#include <gtest/gtest.h>

#include "json.hpp"

#include "support/figure.h"
#include "support/tiny.h"
#include "zsp/errors.h"

namespace zsp::pipeline {
namespace {

embed::EmbeddingTable figureEmbeddings() {
  embed::EmbeddingTable t(3);
  t.add("meeting", Eigen::Vector3d(1, 0, 0));
  t.add("recipe", Eigen::Vector3d(0.9, 0.1, 0));
  t.add("ingredient", Eigen::Vector3d(0, 1, 0));
  t.add("attendee", Eigen::Vector3d(0, 0.9, 0.2));
  t.add("person", Eigen::Vector3d(0, 0, 1));
  return t;
}

TEST(Modes, NamesRoundTrip) {
  for (Mode m : {Mode::kInLex, Mode::kInAbstract, Mode::kCrossLex, Mode::kCrossLexRep,
                 Mode::kZeroShot}) {
    EXPECT_EQ(parseMode(modeName(m)), m);
  }
  EXPECT_EQ(parseMode("zeroshot"), Mode::kZeroShot);
  EXPECT_THROW(parseMode("Sideways"), ConfigError);
  EXPECT_TRUE(isAbstractMode(Mode::kInAbstract));
  EXPECT_FALSE(isAbstractMode(Mode::kCrossLexRep));
}

TEST(Ablations, ParseAndName) {
  EXPECT_EQ(parseAblation("full").name(), "full");
  Ablation a = parseAblation("-Aligner,Inference");
  EXPECT_TRUE(a.noAligner && a.noInference && !a.noGlobalHeur);
  EXPECT_EQ(a.name(), "-Aligner,Inference");
  EXPECT_EQ(parseAblation("globalheur").name(), "-GlobalHeur");
  EXPECT_EQ(parseAblation("inference,aligner"), a);
  EXPECT_THROW(parseAblation("-parser"), ConfigError);
  infer::ParseOptions o = parseOptions(Hyper{}, a);
  EXPECT_EQ(o.alignment, infer::AlignmentSource::kAttention);
  EXPECT_FALSE(o.exactInference);
  EXPECT_FALSE(parseOptions(Hyper{}, parseAblation("-globalheur")).global.requireOnce);
}

TEST(EvalDenotation, CountsMissingAsWrong) {
  auto ex = testing::calendarExample();
  std::vector<lf::LogicalForm> golds{ex.lf, ex.lf, ex.lf};
  std::vector<std::optional<lf::LogicalForm>> preds{
      // Same denotation, different form.
      lf::parseLF("(entity WeeklyStandup)"), std::nullopt, lf::parseLF("(type Person)")};
  EXPECT_NEAR(evalDenotation(preds, golds, ex.kb.kb), 1.0 / 3, 1e-12);
  EXPECT_FALSE(denotationMatch(lf::parseLF("(type Castle)"), lf::parseLF("(type Castle)"),
                               ex.kb.kb));
  preds.pop_back();
  EXPECT_THROW(evalDenotation(preds, golds, ex.kb.kb), DimMismatch);
}

TEST(CrossLexReplace, MapsConstantsToMostSimilarTargetConstant) {
  auto source = testing::calendarExample();
  auto target = testing::recipesExample();
  auto emb = figureEmbeddings();
  lf::LogicalForm got = crossLexReplace(source.lf, target.kb, {&source.kb}, emb);
  EXPECT_EQ(lf::printLF(got),
            "(and (type Recipe) (compare <= (countrev IngredientOf) (num 3)))");
  // Constants the target already has are kept.
  lf::LogicalForm keep = lf::parseLF("(type Ingredient)");
  EXPECT_TRUE(crossLexReplace(keep, target.kb, {&source.kb}, emb) == keep);
  EXPECT_THROW(crossLexReplace(lf::parseLF("(type Castle)"), target.kb, {&source.kb}, emb),
               UnknownConstant);
}

TEST(CrossLexReplace, MissingCategoryThrows) {
  auto target = testing::recipesExample();
  kb::KbContent c;
  c.domain = "calendar";
  c.entityTypes = {"Meeting"};
  c.relations = {{"Length", "Meeting", kb::ObjectKind::kNumber, "", false,
                  kb::Category::kRelNum}};
  kb::Lexicon lex;
  lex.set("Meeting", "meeting");
  lex.set("Length", "length");
  kb::LoadedKb source{kb::KnowledgeBase(std::move(c)), std::move(lex)};
  EXPECT_THROW(crossLexReplace(lf::parseLF("(compare > Length (num 2))"), target.kb, {&source},
                               figureEmbeddings()),
               NoCandidateOfType);
}

TEST(ProjectLinks, FollowsProvenance) {
  auto ex = testing::calendarExample();
  delex::AdjectiveStats stats({{"a", {"more"}}, {"b", {"more"}}});
  auto u = delex::delexUtterance(ex.tokens, ex.kb.kb, stats, "calendar");
  // Lexical positions map one to one here; -1 stays -1.
  align::Links lexical{1, -1, 7, 6};
  EXPECT_EQ(projectLinks(lexical, u), (align::Links{1, -1, 7, 6}));
}

class ExperimentTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { corpus_ = new Corpus(testing::tinyCorpus()); }
  static void TearDownTestSuite() { delete corpus_; }

  static ExperimentConfig zeroShot() {
    ExperimentConfig c;
    c.mode = Mode::kZeroShot;
    c.target = "recipes";
    c.seeds = {1};
    c.variants = {parseAblation("full"), parseAblation("-inference"),
                  parseAblation("-aligner,inference")};
    c.hyper = testing::tinyHyper();
    return c;
  }

  static Corpus* corpus_;
};

Corpus* ExperimentTest::corpus_ = nullptr;

TEST_F(ExperimentTest, ReportIsDeterministicAndWellFormed) {
  MetricsReport a = runExperiment(zeroShot(), *corpus_);
  MetricsReport b = runExperiment(zeroShot(), *corpus_);
  EXPECT_EQ(a.json(), b.json());
  EXPECT_EQ(a.sources, (std::vector<std::string>{"calendar", "housing"}));
  auto j = nlohmann::json::parse(a.json());
  EXPECT_EQ(j["mode"], "ZeroShot");
  ASSERT_EQ(j["variants"].size(), 3u);
  for (const auto& v : a.variants) {
    ASSERT_EQ(v.perSeed.size(), 1u);
    const Metrics& m = v.perSeed[0];
    EXPECT_EQ(m.examples, selectSplit(corpus_->domain("recipes"), Split::kTest).size());
    for (double x : {m.denotationAccuracy, *m.abstractExactMatch, *m.alignmentAccuracy,
                     *m.inferenceSuccess, *m.assignmentCorrect}) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    EXPECT_EQ(m.meanSteps.has_value(), *m.inferenceSuccess > 0);
    EXPECT_EQ(v.meanAccuracy, m.denotationAccuracy);
  }
  EXPECT_GT(a.variant("full").meanAccuracy, 0.5);
  EXPECT_GE(a.variant("full").meanAccuracy, a.variant("-Aligner,Inference").meanAccuracy);
  EXPECT_NE(a.table().find("-Inference"), std::string::npos);
  EXPECT_THROW(a.variant("nope"), ConfigError);
}

// Nothing from the target's training or dev split reaches the models.
TEST_F(ExperimentTest, ZeroShotIgnoresTargetTrainingData) {
  Corpus stripped = testing::tinyCorpus();
  for (auto& d : stripped.domains) {
    if (d.name != "recipes") continue;
    std::vector<Example> kept;
    for (auto& e : d.examples) {
      if (splitOf(e.id) == Split::kTest) kept.push_back(std::move(e));
    }
    d.examples = std::move(kept);
  }
  EXPECT_EQ(runExperiment(zeroShot(), *corpus_).json(), runExperiment(zeroShot(), stripped).json());
}

TEST_F(ExperimentTest, CrossLexFindsNoTargetConstants) {
  ExperimentConfig c = zeroShot();
  c.mode = Mode::kCrossLex;
  c.variants = {Ablation{}};
  MetricsReport r = runExperiment(c, *corpus_);
  EXPECT_EQ(r.variant("full").meanAccuracy, 0.0);
  c.mode = Mode::kCrossLexRep;
  MetricsReport rep = runExperiment(c, *corpus_);
  EXPECT_GE(rep.variant("full").meanAccuracy, 0.0);
  EXPECT_FALSE(rep.variant("full").perSeed[0].abstractExactMatch);
}

TEST_F(ExperimentTest, InDomainModesTrainOnTarget) {
  ExperimentConfig c = zeroShot();
  c.mode = Mode::kInLex;
  c.variants = {Ablation{}};
  MetricsReport r = runExperiment(c, *corpus_);
  EXPECT_TRUE(r.sources.empty());
  EXPECT_GT(r.variant("full").meanAccuracy, 0.0);
}

TEST_F(ExperimentTest, RejectsBadConfigs) {
  ExperimentConfig c = zeroShot();
  c.sources = {"recipes"};
  EXPECT_THROW(runExperiment(c, *corpus_), ConfigError);
  c = zeroShot();
  c.seeds.clear();
  EXPECT_THROW(runExperiment(c, *corpus_), ConfigError);
  c = zeroShot();
  c.mode = Mode::kCrossLex;
  EXPECT_THROW(runExperiment(c, *corpus_), ConfigError);
  c = zeroShot();
  c.target = "weather";
  EXPECT_THROW(runExperiment(c, *corpus_), ConfigError);
}

TEST_F(ExperimentTest, LearningCurve) {
  Hyper h = testing::tinyHyper();
  LearningCurve curve = learningCurve(*corpus_, "recipes", {0.25, 1.0}, {1}, h, 0.0);
  ASSERT_EQ(curve.points.size(), 2u);
  EXPECT_EQ(curve.crossover, 0.25);
  LearningCurve none = learningCurve(*corpus_, "recipes", {0.25}, {1}, h, 2.0);
  EXPECT_FALSE(none.crossover);
  EXPECT_EQ(nlohmann::json::parse(none.json())["crossover"], nullptr);
  EXPECT_THROW(learningCurve(*corpus_, "recipes", {0.0}, {1}, h), ConfigError);
  EXPECT_THROW(learningCurve(*corpus_, "recipes", {1.5}, {1}, h), ConfigError);
  EXPECT_THROW(learningCurve(*corpus_, "recipes", {0.5}, {}, h), ConfigError);
}

}  // namespace
}  // namespace zsp::pipeline
