#ifndef ZSP_DATASET_H_
#define ZSP_DATASET_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zsp/delex.h"
#include "zsp/embed.h"
#include "zsp/kb.h"
#include "zsp/lf.h"

namespace zsp::pipeline {

struct Example {
  std::string id;
  std::string domain;
  std::vector<delex::AnnotatedToken> tokens;
  lf::LogicalForm lf;
};

// One JSON object per line:
//   {"id": .., "domain": .., "tokens": [{"surface", "lemma", "pos", "value"}],
//    "logical_form": "(type Meeting)"}
// `value` is present on NUM and DATE tokens only. Throws FormatError with the
// file and line on malformed records, including unparseable logical forms.
std::vector<Example> parseExamples(std::string_view text,
                                   const std::string& source);
std::vector<Example> loadExamples(const std::string& path);

std::string exampleJson(const Example& example);
void writeExamples(const std::string& path, const std::vector<Example>& examples);

// Examples of several files grouped by domain, file order kept within a
// domain. Empty files contribute nothing and log a warning to stderr.
std::map<std::string, std::vector<Example>> loadDataset(
    const std::vector<std::string>& paths);

std::vector<std::string> surfaces(const Example& example);
std::vector<std::string> lemmas(const Example& example);

struct DomainData {
  std::string name;
  kb::LoadedKb kb;
  std::vector<Example> examples;
};

struct Corpus {
  std::vector<DomainData> domains;
  embed::EmbeddingTable embeddings;

  // Throws ConfigError for an unknown domain.
  const DomainData& domain(std::string_view name) const;
  std::vector<std::string> domainNames() const;
};

// Reads <dir>/<domain>.kb.json and <dir>/<domain>.jsonl for each domain and
// <dir>/embeddings.txt. Throws FormatError.
Corpus loadCorpus(const std::string& dir, const std::vector<std::string>& domains);

enum class Split : unsigned char { kTrain, kDev, kTest };

// 20% of examples are test; 20% of the rest are dev. Stable across runs and
// platforms (FNV-1a of the example id).
Split splitOf(std::string_view exampleId);
std::uint64_t stableHash(std::string_view text);

std::vector<const Example*> selectSplit(const DomainData& domain, Split split);

}  // namespace zsp::pipeline

#endif  // ZSP_DATASET_H_
