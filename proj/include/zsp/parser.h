#ifndef ZSP_PARSER_H_
#define ZSP_PARSER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zsp/delex.h"
#include "zsp/embed.h"
#include "zsp/infer.h"
#include "zsp/kb.h"
#include "zsp/lf.h"
#include "zsp/mapper.h"
#include "zsp/student.h"

namespace zsp::infer {

enum class AlignmentSource : unsigned char {
  kAligner,    // Student slot aligner.
  kAttention,  // Mapper decoder attention (-Aligner).
};

struct ParseOptions {
  int beam = 5;
  int maxSteps = 500;  // T
  int maxDecode = 80;
  AlignmentSource alignment = AlignmentSource::kAligner;
  // false: per-slot argmax without global checks (-Inference).
  bool exactInference = true;
  GlobalOptions global;
};

struct HypothesisTrace {
  int rank = 0;
  std::vector<std::string> tokens;
  double mapperScore = 0;
  bool valid = false;
  int steps = 0;
  bool succeeded = false;
  std::vector<double> poppedScores;
  std::string error;
};

struct ParseResult {
  std::optional<lf::LogicalForm> lf;
  delex::AbstractUtterance utterance;
  std::vector<HypothesisTrace> hypotheses;
  // Index into `hypotheses` of the one that produced `lf`.
  std::optional<int> chosen;
  std::vector<std::string> abstractTokens() const;
  int steps() const;
};

struct SlotFill {
  SlotCandidates candidates;
  InferResult inference;
  std::string error;
};

// Test-time pipeline: delexicalize, decode abstract forms with the mapper,
// then per valid hypothesis in beam order align slots, score candidates and
// run inference. The first hypothesis with a successful assignment wins.
class Parser {
 public:
  Parser(const mapper::StructureMapper& mapper,
         const align::SlotAligner* aligner, const kb::KnowledgeBase& kb,
         const kb::Lexicon& lexicon, const embed::EmbeddingTable& embeddings,
         const delex::AdjectiveStats& adjectives, ParseOptions options = {});

  ParseResult parse(std::span<const delex::AnnotatedToken> tokens) const;

  // Alignment, candidates and inference for one abstract form.
  SlotFill fill(const delex::AbstractUtterance& utterance,
                const std::vector<std::string>& absTokens) const;

  // Slot rows of the alignment matrix for `absTokens`.
  nn::Mat alignSlots(const delex::AbstractUtterance& utterance,
                     const std::vector<std::string>& absTokens,
                     const std::vector<std::size_t>& slots) const;

  const ParseOptions& options() const { return options_; }

 private:
  const mapper::StructureMapper& mapper_;
  const align::SlotAligner* aligner_;
  const kb::KnowledgeBase& kb_;
  const kb::Lexicon& lexicon_;
  const embed::EmbeddingTable& embeddings_;
  const delex::AdjectiveStats& adjectives_;
  ParseOptions options_;
};

}  // namespace zsp::infer

#endif  // ZSP_PARSER_H_
