#ifndef ZSP_SYNTH_H_
#define ZSP_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "zsp/dataset.h"
#include "zsp/embed.h"
#include "zsp/kb.h"

namespace zsp::pipeline {

// Names of the built-in synthetic domains, in generation order.
const std::vector<std::string>& synthDomainNames();

struct SynthConfig {
  // Subset of synthDomainNames(); empty means all of them.
  std::vector<std::string> domains;
  int samplesPerDomain = 300;
  std::uint64_t seed = 7;
  int embeddingDim = 50;
  // Per-component uniform noise added to a word's concept vector.
  double embeddingNoise = 0.4;
};

struct SynthCorpus {
  Corpus corpus;
  // Embedding words in file order.
  std::vector<std::string> words;
};

// Domains share one set of structural templates (counting comparatives,
// numeric and date comparatives, joins, reverse, unary filters, superlatives,
// aggregates, union, conjunction) and differ only in content words and KB
// constants. Every gold form executes on its KB. Word vectors put the words
// describing one constant (utterance lemmas and lexicon phrase words) around
// a shared random concept vector; other words get their own concept.
// Throws ConfigError.
SynthCorpus synthGen(const SynthConfig& config);

// Writes <dir>/<domain>.kb.json, <dir>/<domain>.jsonl and
// <dir>/embeddings.txt.
void writeSynth(const SynthCorpus& corpus, const std::string& dir);

}  // namespace zsp::pipeline

#endif  // ZSP_SYNTH_H_
