#include "zsp/student.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "support/toys.h"
#include "zsp/errors.h"

namespace zsp::align {
namespace {

// Teacher-labelled aligned pairs: concept tokens are the slots.
std::vector<AlignedPair> distilled(const testing::SeparableCorpus& corpus,
                                   const Teacher& teacher) {
  std::vector<AlignedPair> out;
  for (const auto& p : corpus.pairs) {
    AlignedPair a{p.words, p.lfTokens, {}, teacher.viterbi(p)};
    for (std::size_t i = 0; i < p.lfTokens.size(); ++i) {
      if (p.lfTokens[i] != "(" && p.lfTokens[i] != ")") a.slots.push_back(i);
    }
    out.push_back(std::move(a));
  }
  return out;
}

AlignerConfig smallConfig() {
  return {.embed = 10, .hidden = 12, .dropout = 0.0, .initScale = 0.1};
}

AlignerTrainConfig smallTraining() {
  AlignerTrainConfig t;
  t.epochs = 12;
  t.optimizer = {.kind = nn::OptimizerConfig::Kind::kAdam, .lr = 0.01};
  return t;
}

TEST(SlotAligner, RowsAreDistributions) {
  auto corpus = testing::separableCorpus(1, 20);
  Teacher teacher;
  teacher.train(corpus.pairs);
  auto data = distilled(corpus, teacher);
  auto aligner = SlotAligner::train(data, {}, smallConfig(), smallTraining());
  for (const auto& p : data) {
    nn::Mat rows = aligner->align(p.utterance, p.lf, p.slots);
    ASSERT_EQ(rows.rows(), static_cast<int>(p.slots.size()));
    ASSERT_EQ(rows.cols(), static_cast<int>(p.utterance.size()));
    for (int r = 0; r < rows.rows(); ++r) {
      EXPECT_NEAR(rows.row(r).sum(), 1.0, 1e-12);
      EXPECT_GE(rows.row(r).minCoeff(), 0.0);
    }
  }
}

TEST(SlotAligner, DistillsTeacherOnHeldOutPairs) {
  auto corpus = testing::separableCorpus(3, 400);
  Teacher teacher;
  teacher.train(corpus.pairs);
  auto data = distilled(corpus, teacher);
  std::vector<AlignedPair> train(data.begin(), data.begin() + 300);
  std::vector<AlignedPair> held(data.begin() + 300, data.end());
  AlignerReport report;
  auto aligner = SlotAligner::train(train, {}, smallConfig(), smallTraining(), &report);
  EXPECT_GE(alignmentAccuracy(*aligner, held), 0.9);
  ASSERT_EQ(report.epochs.size(), 12u);
  EXPECT_LT(report.epochs.back().loss, report.epochs.front().loss);
}

TEST(SlotAligner, NullLinkedSlotsAreSkipped) {
  AlignerConfig c = smallConfig();
  SlotAligner a(c, nn::Vocab({"x"}), nn::Vocab({"T"}));
  nn::Rng rng(1);
  a.init(rng);
  AlignedPair p{{"x", "x"}, {"T", "T"}, {0, 1}, {-1, -1}};
  EXPECT_EQ(a.loss(p, nullptr, false), 0.0);
}

TEST(SlotAligner, SaveLoadRoundTrips) {
  auto corpus = testing::separableCorpus(2, 30);
  Teacher teacher;
  teacher.train(corpus.pairs);
  auto data = distilled(corpus, teacher);
  AlignerTrainConfig t = smallTraining();
  t.epochs = 2;
  auto aligner = SlotAligner::train(data, {}, smallConfig(), t);
  std::string path = (std::filesystem::temp_directory_path() / "zsp_aligner.ckpt").string();
  aligner->save(path);
  auto back = SlotAligner::load(path);
  for (const auto& p : data) {
    EXPECT_EQ(aligner->align(p.utterance, p.lf, p.slots), back->align(p.utterance, p.lf, p.slots));
  }
  EXPECT_EQ(back->configJson(), aligner->configJson());
}

TEST(SlotAligner, EmptyTrainingSetThrows) {
  EXPECT_THROW(SlotAligner::train({}, {}, smallConfig(), smallTraining()), EmptyTrainingSet);
}

}  // namespace
}  // namespace zsp::align
