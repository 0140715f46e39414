#include "zsp/synth.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zsp/errors.h"
#include "zsp/execute.h"
#include "zsp/experiment.h"

namespace zsp::pipeline {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SynthConfig smallConfig() {
  SynthConfig c;
  c.domains = {"calendar", "recipes"};
  c.samplesPerDomain = 40;
  c.embeddingDim = 8;
  return c;
}

TEST(Synth, GoldFormsExecute) {
  SynthCorpus s = synthGen({});
  ASSERT_EQ(s.corpus.domains.size(), 6u);
  std::size_t total = 0;
  for (const auto& d : s.corpus.domains) {
    for (const auto& ex : d.examples) {
      ++total;
      ASSERT_TRUE(lf::execute(ex.lf, d.kb.kb).ok()) << ex.id << " " << lf::printLF(ex.lf);
      ASSERT_EQ(ex.domain, d.name);
    }
  }
  EXPECT_EQ(total, 1800u);
  EXPECT_EQ(s.words.size(), s.corpus.embeddings.size());
}

TEST(Synth, ShippedFixtureIsReproducible) {
  auto dir = std::filesystem::temp_directory_path() / "zsp_synth_test";
  std::filesystem::remove_all(dir);
  writeSynth(synthGen({}), dir.string());
  const std::filesystem::path fixture = std::string(ZSP_SOURCE_DIR) + "/data/synth";
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(fixture)) {
    ++files;
    EXPECT_EQ(slurp(entry.path()), slurp(dir / entry.path().filename()))
        << entry.path().filename();
  }
  EXPECT_EQ(files, 13u);
}

TEST(Synth, SeedChangesOutput) {
  SynthConfig a = smallConfig();
  SynthConfig b = smallConfig();
  b.seed = a.seed + 1;
  auto ea = synthGen(a).corpus.domains[0].examples;
  auto eb = synthGen(b).corpus.domains[0].examples;
  bool differ = false;
  for (std::size_t i = 0; i < ea.size(); ++i) differ |= exampleJson(ea[i]) != exampleJson(eb[i]);
  EXPECT_TRUE(differ);
}

// Domains share structure: most abstract forms of one domain also occur in
// another.
TEST(Synth, AbstractFormsAreShared) {
  SynthCorpus s = synthGen({});
  std::map<std::string, std::set<std::string>> byDomain;
  for (const auto& d : s.corpus.domains) {
    for (const auto& ex : d.examples) {
      auto abs = delex::delexLogicalForm(ex.lf, d.kb.kb);
      std::string key;
      for (const auto& t : abs.tokens) key += t + " ";
      byDomain[d.name].insert(key);
    }
  }
  for (const auto& [domain, forms] : byDomain) {
    std::size_t shared = 0;
    for (const auto& f : forms) {
      for (const auto& [other, otherForms] : byDomain) {
        if (other != domain && otherForms.count(f)) {
          ++shared;
          break;
        }
      }
    }
    EXPECT_GE(static_cast<double>(shared) / forms.size(), 0.8) << domain;
  }
}

TEST(Synth, UtterancesAbstractToUnseenDomainVocabulary) {
  SynthCorpus s = synthGen(smallConfig());
  for (const auto& d : s.corpus.domains) {
    for (const auto& ex : d.examples) {
      AbstractExample a = abstractExample(ex, d.kb.kb, {});
      EXPECT_EQ(a.utterance.sources.size(), a.utterance.tokens.size());
      EXPECT_FALSE(a.input.empty());
    }
  }
}

TEST(Synth, RejectsBadConfig) {
  SynthConfig c = smallConfig();
  c.domains = {"calendar", "weather"};
  EXPECT_THROW(synthGen(c), ConfigError);
  c.domains = {"calendar"};
  EXPECT_THROW(synthGen(c), ConfigError);
  c.domains = {"calendar", "calendar"};
  EXPECT_THROW(synthGen(c), ConfigError);
  c = smallConfig();
  c.samplesPerDomain = 0;
  EXPECT_THROW(synthGen(c), ConfigError);
  c = smallConfig();
  c.embeddingDim = 0;
  EXPECT_THROW(synthGen(c), ConfigError);
  EXPECT_EQ(synthDomainNames().size(), 6u);
}

}  // namespace
}  // namespace zsp::pipeline
