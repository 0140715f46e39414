#include "zsp/infer.h"

#include <gtest/gtest.h>

#include "support/figure.h"
#include "support/toys.h"
#include "zsp/errors.h"

namespace zsp::infer {
namespace {

std::vector<std::string> tokensOf(const Assignment& a) { return a.fillers; }

TEST(ExactInfer, AgreesWithBruteForce) {
  std::mt19937_64 gen(77);
  for (int n = 0; n < 500; ++n) {
    testing::InferInstance inst = testing::randomInferInstance(gen);
    Feasible f = [&](const std::vector<std::size_t>& v) { return inst.isFeasible(v); };
    InferResult exact = exactInfer(inst.cands, f, 1 << 20);
    auto brute = bruteForceInfer(inst.cands, f);
    ASSERT_TRUE(exact.assignment && brute);
    EXPECT_EQ(exact.assignment->indices, brute->indices);
    EXPECT_EQ(exact.assignment->score, brute->score);
    EXPECT_EQ(exact.assignment->fillers, brute->fillers);
  }
}

TEST(ExactInfer, PopsInNonIncreasingScoreOrder) {
  std::mt19937_64 gen(5);
  for (int n = 0; n < 200; ++n) {
    testing::InferInstance inst = testing::randomInferInstance(gen);
    InferResult r = exactInfer(inst.cands, [](const auto&) { return false; }, 1 << 20);
    EXPECT_FALSE(r.assignment);
    // Every vector is popped exactly once.
    std::size_t total = 1;
    for (const auto& row : inst.cands) total *= row.size();
    EXPECT_EQ(static_cast<std::size_t>(r.steps), total);
    ASSERT_EQ(r.poppedScores.size(), total);
    for (std::size_t k = 1; k < r.poppedScores.size(); ++k) {
      EXPECT_LE(r.poppedScores[k], r.poppedScores[k - 1]);
    }
  }
}

TEST(ExactInfer, StopsAfterMaxSteps) {
  SlotCandidates cands{{{"a", 0.9}, {"b", 0.5}, {"c", 0.1}}, {{"x", 0.7}, {"y", 0.6}}};
  int tests = 0;
  InferResult r = exactInfer(cands, [&](const auto&) { ++tests; return false; }, 4);
  EXPECT_FALSE(r.assignment);
  EXPECT_EQ(r.steps, 4);
  EXPECT_EQ(tests, 4);
  InferResult ok = exactInfer(
      cands, [](const auto& v) { return v == std::vector<std::size_t>{1, 1}; }, 6);
  ASSERT_TRUE(ok.assignment);
  EXPECT_EQ(ok.assignment->fillers, (std::vector<std::string>{"b", "y"}));
  EXPECT_NEAR(ok.assignment->score, 1.1, 1e-12);
  EXPECT_TRUE(ok.assignment->satisfiedGlobal);
}

TEST(ExactInfer, TiesGoToLexicographicallySmallerVector) {
  SlotCandidates cands{{{"a", 0.5}, {"b", 0.5}}, {{"x", 0.5}, {"y", 0.5}}};
  InferResult r = exactInfer(cands, [](const auto&) { return false; }, 10);
  EXPECT_EQ(r.steps, 4);
  InferResult first = exactInfer(cands, [](const auto& v) { return v[0] + v[1] == 1; }, 10);
  ASSERT_TRUE(first.assignment);
  EXPECT_EQ(first.assignment->indices, (std::vector<std::size_t>{0, 1}));
}

TEST(BruteForce, RejectsHugeSpaces) {
  SlotCandidates cands(7, std::vector<ScoredCandidate>(8, {"c", 0.1}));
  EXPECT_THROW(bruteForceInfer(cands, [](const auto&) { return true; }), TooLarge);
}

TEST(ArgmaxInfer, TakesTopCandidates) {
  SlotCandidates cands{{{"a", 0.9}, {"b", 0.5}}, {{"x", 0.7}}};
  Assignment a = argmaxInfer(cands);
  EXPECT_EQ(a.indices, (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(tokensOf(a), (std::vector<std::string>{"a", "x"}));
  EXPECT_NEAR(a.score, totalScore(cands, {0, 0}), 0);
  EXPECT_FALSE(a.satisfiedGlobal);
}

class FigureInference : public ::testing::Test {
 protected:
  void SetUp() override {
    ex_ = std::make_unique<testing::FigureExample>(testing::calendarExample());
    delex::AdjectiveStats stats({{"a", {"more"}}, {"b", {"more"}}});
    utterance_ = delex::delexUtterance(ex_->tokens, ex_->kb.kb, stats, "calendar");
    lf_ = delex::delexLogicalForm(ex_->lf, ex_->kb.kb);
    table_.add("meetings", Eigen::Vector3d(1, 0, 0));
    table_.add("meeting", Eigen::Vector3d(1, 0, 0));
    table_.add("person", Eigen::Vector3d(0, 1, 0));
    table_.add("attendee", Eigen::Vector3d(0, 1, 1));
    table_.add("attendees", Eigen::Vector3d(0, 1, 1));
  }

  // One-hot alignment rows pointing at the given utterance positions.
  nn::Mat rows(std::vector<int> positions) const {
    nn::Mat m = nn::Mat::Zero(static_cast<int>(positions.size()),
                              static_cast<int>(utterance_.tokens.size()));
    for (std::size_t r = 0; r < positions.size(); ++r) m(r, positions[r]) = 1.0;
    return m;
  }

  std::unique_ptr<testing::FigureExample> ex_;
  delex::AbstractUtterance utterance_;
  delex::AbstractLogicalForm lf_;
  embed::EmbeddingTable table_{3};
};

TEST_F(FigureInference, SimilarityOfLiteralsIsByValue) {
  EXPECT_EQ(positionSimilarity(utterance_, 6, "3", kb::Category::kNum, ex_->kb.lexicon, table_),
            1.0);
  EXPECT_EQ(positionSimilarity(utterance_, 6, "4", kb::Category::kNum, ex_->kb.lexicon, table_),
            0.0);
  EXPECT_EQ(positionSimilarity(utterance_, 1, "Meeting", kb::Category::kEntType,
                               ex_->kb.lexicon, table_),
            1.0);
}

TEST_F(FigureInference, CorrectAlignmentFillsTheFigure) {
  SlotCandidates cands =
      buildCands(lf_, ex_->kb.kb, ex_->kb.lexicon, utterance_, rows({1, 7, 6}), table_);
  ASSERT_EQ(cands.size(), 3u);
  EXPECT_EQ(cands[0][0].token, "Meeting");
  EXPECT_EQ(cands[2].size(), 1u);
  InferResult r = exactInfer(cands, lf_, ex_->kb.kb, 50);
  ASSERT_TRUE(r.assignment);
  EXPECT_EQ(r.steps, 1);
  EXPECT_EQ(r.assignment->fillers, lf_.fillers);
}

TEST_F(FigureInference, GlobalCheckRepairsMisalignment) {
  // The type slot looks at "attendees", which favors Person locally.
  SlotCandidates cands =
      buildCands(lf_, ex_->kb.kb, ex_->kb.lexicon, utterance_, rows({7, 7, 6}), table_);
  EXPECT_EQ(cands[0][0].token, "Person");
  EXPECT_EQ(argmaxInfer(cands).fillers[0], "Person");
  InferResult r = exactInfer(cands, lf_, ex_->kb.kb, 50);
  ASSERT_TRUE(r.assignment);
  EXPECT_EQ(r.assignment->fillers, lf_.fillers);
  EXPECT_EQ(r.steps, 2);
  EXPECT_EQ(bruteForceInfer(cands, lf_, ex_->kb.kb)->fillers, lf_.fillers);
}

TEST_F(FigureInference, EqualScoresKeepCandidateOrder) {
  embed::EmbeddingTable empty(3);
  SlotCandidates cands =
      buildCands(lf_, ex_->kb.kb, ex_->kb.lexicon, utterance_, rows({1, 7, 6}), empty);
  ASSERT_EQ(cands[0].size(), 2u);
  EXPECT_EQ(cands[0][0].score, cands[0][1].score);
  EXPECT_EQ(cands[0][0].token, "Meeting");
  EXPECT_EQ(cands[0][1].token, "Person");
}

TEST_F(FigureInference, MissingNumbersLeaveSlotEmpty) {
  delex::AbstractUtterance noNumbers = utterance_;
  noNumbers.extracted.numbers.clear();
  try {
    buildCands(lf_, ex_->kb.kb, ex_->kb.lexicon, noNumbers, rows({1, 7, 6}), table_);
    FAIL() << "expected EmptyCandidates";
  } catch (const EmptyCandidates& e) {
    EXPECT_EQ(e.slot(), 2u);
  }
}

TEST_F(FigureInference, GlobalOkChecks) {
  auto ok = [&](std::vector<std::string> fillers, GlobalOptions opt = {}) {
    return globalOk(fillers, lf_.tokens, ex_->kb.kb, opt);
  };
  EXPECT_TRUE(ok({"Meeting", "Attendee", "3"}));
  EXPECT_FALSE(ok({"Person", "Attendee", "3"}));
  EXPECT_FALSE(ok({"Castle", "Attendee", "3"}));
  EXPECT_FALSE(ok({"Meeting", "Attendee"}));
  EXPECT_TRUE(ok({"Meeting", "Attendee", "1"}));
  EXPECT_FALSE(ok({"Meeting", "Attendee", "1"}, {.requireNonEmpty = true}));

  std::vector<std::string> twoNums{"(", "or", "(", "num", "$NUM", ")", "(", "num", "$NUM",
                                   ")", ")"};
  std::vector<std::string> same{"3", "3"};
  EXPECT_FALSE(globalOk(same, twoNums, ex_->kb.kb));
  EXPECT_TRUE(globalOk(same, twoNums, ex_->kb.kb, {.requireOnce = false}));
}

}  // namespace
}  // namespace zsp::infer
