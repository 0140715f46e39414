#include "zsp/parser.h"

#include "zsp/errors.h"

namespace zsp::infer {

std::vector<std::string> ParseResult::abstractTokens() const {
  if (!chosen) return {};
  return hypotheses[static_cast<std::size_t>(*chosen)].tokens;
}

int ParseResult::steps() const {
  if (!chosen) return 0;
  return hypotheses[static_cast<std::size_t>(*chosen)].steps;
}

Parser::Parser(const mapper::StructureMapper& mapper,
               const align::SlotAligner* aligner, const kb::KnowledgeBase& kb,
               const kb::Lexicon& lexicon,
               const embed::EmbeddingTable& embeddings,
               const delex::AdjectiveStats& adjectives, ParseOptions options)
    : mapper_(mapper),
      aligner_(aligner),
      kb_(kb),
      lexicon_(lexicon),
      embeddings_(embeddings),
      adjectives_(adjectives),
      options_(options) {
  if (options_.alignment == AlignmentSource::kAligner && !aligner_) {
    throw ConfigError("parser needs a slot aligner unless decoder attention "
                      "is the alignment source");
  }
  if (options_.beam < 1 || options_.maxSteps < 1) {
    throw ConfigError("beam and step limit must be positive");
  }
}

nn::Mat Parser::alignSlots(const delex::AbstractUtterance& utterance,
                           const std::vector<std::string>& absTokens,
                           const std::vector<std::size_t>& slots) const {
  std::vector<std::string> input = mapper::mapperInput(utterance);
  if (options_.alignment == AlignmentSource::kAligner) {
    return aligner_->align(input, absTokens, slots);
  }
  nn::Mat all = mapper_.decoderAttention(input, absTokens);
  nn::Mat rows(static_cast<Eigen::Index>(slots.size()), all.cols());
  for (std::size_t r = 0; r < slots.size(); ++r) {
    rows.row(static_cast<Eigen::Index>(r)) =
        all.row(static_cast<Eigen::Index>(slots[r]));
  }
  return rows;
}

SlotFill Parser::fill(const delex::AbstractUtterance& utterance,
                      const std::vector<std::string>& absTokens) const {
  SlotFill out;
  delex::AbstractLogicalForm absLf;
  absLf.tokens = absTokens;
  absLf.slots = delex::slotPositions(absTokens);
  try {
    nn::Mat a = alignSlots(utterance, absTokens, absLf.slots);
    out.candidates = buildCands(absLf, kb_, lexicon_, utterance, a, embeddings_);
  } catch (const Error& e) {
    out.error = e.what();
    return out;
  }
  if (options_.exactInference) {
    out.inference = exactInfer(out.candidates, absLf, kb_, options_.maxSteps,
                               options_.global);
  } else {
    Assignment a = argmaxInfer(out.candidates);
    out.inference.steps = 1;
    out.inference.poppedScores.push_back(a.score);
    out.inference.assignment = std::move(a);
  }
  return out;
}

ParseResult Parser::parse(std::span<const delex::AnnotatedToken> tokens) const {
  ParseResult result;
  result.utterance = delex::delexUtterance(tokens, kb_, adjectives_, kb_.domain());
  std::vector<mapper::AbstractHypothesis> hyps = mapper_.predict(
      mapper::mapperInput(result.utterance), options_.beam, options_.maxDecode);
  for (std::size_t rank = 0; rank < hyps.size(); ++rank) {
    HypothesisTrace trace;
    trace.rank = static_cast<int>(rank);
    trace.tokens = hyps[rank].tokens;
    trace.mapperScore = hyps[rank].score;
    trace.valid = hyps[rank].valid;
    if (!trace.valid) {
      trace.error = "not a well-formed abstract logical form";
      result.hypotheses.push_back(std::move(trace));
      continue;
    }
    SlotFill f = fill(result.utterance, trace.tokens);
    trace.error = std::move(f.error);
    trace.steps = f.inference.steps;
    trace.poppedScores = std::move(f.inference.poppedScores);
    if (f.inference.assignment) {
      try {
        result.lf = lf::delinearize(
            delex::fillSlots(trace.tokens, f.inference.assignment->fillers));
        trace.succeeded = true;
      } catch (const Error& e) {
        // Only reachable without global checks.
        trace.error = e.what();
      }
    }
    result.hypotheses.push_back(std::move(trace));
    if (result.lf) {
      result.chosen = static_cast<int>(rank);
      break;
    }
  }
  return result;
}

}  // namespace zsp::infer
