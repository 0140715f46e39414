#include "zsp/embed.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "zsp/errors.h"

namespace zsp::embed {
namespace {

std::string writeTemp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

EmbeddingTable table3() {
  EmbeddingTable t(3);
  t.add("attendee", Eigen::Vector3d(1, 0, 0));
  t.add("guest", Eigen::Vector3d(0.9, 0.1, 0));
  t.add("price", Eigen::Vector3d(0, 1, 0));
  t.add("scheduled", Eigen::Vector3d(0, 0, 2));
  t.add("date", Eigen::Vector3d(0, 2, 0));
  return t;
}

TEST(LoadEmbeddings, PlainAndHeaderVariants) {
  EmbeddingTable a = loadEmbeddings(writeTemp("zsp_e1.txt", "cat 1 0\nDog 0 1\n"));
  EXPECT_EQ(a.dim(), 2);
  EXPECT_EQ(a.size(), 2u);
  ASSERT_NE(a.find("dog"), nullptr);
  EmbeddingTable b = loadEmbeddings(writeTemp("zsp_e2.txt", "2 2\ncat 1 0\ndog 0 1\n"));
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(b.dim(), 2);
  std::set<std::string> keep{"cat"};
  EXPECT_EQ(loadEmbeddings(writeTemp("zsp_e3.txt", "cat 1 0\ndog 0 1\n"), &keep).size(), 1u);
}

TEST(LoadEmbeddings, RaggedRowsFail) {
  EXPECT_THROW(loadEmbeddings(writeTemp("zsp_e4.txt", "cat 1 0\ndog 0 1 2\n")), FormatError);
  EXPECT_THROW(loadEmbeddings("/nonexistent/vectors.txt"), FormatError);
}

TEST(LoadEmbeddings, SaveRoundTrips) {
  EmbeddingTable t = table3();
  std::string path = writeTemp("zsp_e5.txt", "");
  saveEmbeddings(t, {"attendee", "price"}, path);
  EmbeddingTable back = loadEmbeddings(path);
  EXPECT_EQ(back.size(), 2u);
  EXPECT_LT((*back.find("price") - *t.find("price")).norm(), 1e-9);
}

TEST(EmbeddingTable, DimensionChecked) {
  EmbeddingTable t(3);
  EXPECT_THROW(t.add("x", Eigen::Vector2d(1, 1)), DimMismatch);
}

TEST(EmbeddingTable, PhraseAveragesKnownWords) {
  EmbeddingTable t = table3();
  auto v = t.phrase("scheduled date unknownword");
  ASSERT_TRUE(v);
  EXPECT_LT((*v - Eigen::Vector3d(0, 1, 1)).norm(), 1e-12);
  EXPECT_FALSE(t.phrase("nothing known"));
}

TEST(ScaledCosine, RangeSymmetryAndScale) {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> n(0, 1);
  for (int i = 0; i < 500; ++i) {
    Eigen::VectorXd u(6), v(6);
    for (int k = 0; k < 6; ++k) {
      u[k] = n(gen);
      v[k] = n(gen);
    }
    double s = scaledCosine(u, v);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, scaledCosine(v, u), 1e-15);
    EXPECT_NEAR(s, scaledCosine(3.7 * u, 0.2 * v), 1e-12);
  }
  Eigen::Vector3d x(1, 2, 3);
  EXPECT_NEAR(scaledCosine(x, x), 1.0, 1e-15);
  EXPECT_NEAR(scaledCosine(x, -x), 0.0, 1e-15);
  EXPECT_EQ(scaledCosine(x, Eigen::Vector3d::Zero()), 0.5);
}

TEST(SimPhi, ConstantPhrases) {
  EmbeddingTable t = table3();
  kb::Lexicon lex;
  lex.set("Attendee", "attendee");
  lex.set("MeetingDate", "scheduled date");
  lex.set("Mystery", "zzz");
  EXPECT_NEAR(simPhi("attendee", "Attendee", lex, t), 1.0, 1e-12);
  EXPECT_GT(simPhi("guest", "Attendee", lex, t), simPhi("price", "Attendee", lex, t));
  // Multi-word utterance words average their vectors.
  EXPECT_NEAR(simPhi("scheduled date", "MeetingDate", lex, t), 1.0, 1e-12);
  // Out-of-vocabulary on either side is neutral.
  EXPECT_EQ(simPhi("qwerty", "Attendee", lex, t), 0.5);
  EXPECT_EQ(simPhi("attendee", "Mystery", lex, t), 0.5);
  EXPECT_THROW(phiConstant("Mystery", lex, t), AllOov);
  EXPECT_THROW(phiConstant("Unlisted", lex, t), UnknownConstant);
}

}  // namespace
}  // namespace zsp::embed
