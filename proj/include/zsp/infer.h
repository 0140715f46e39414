#ifndef ZSP_INFER_H_
#define ZSP_INFER_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zsp/delex.h"
#include "zsp/embed.h"
#include "zsp/kb.h"
#include "zsp/nn/params.h"

namespace zsp::infer {

// Similarity of utterance position `j` to a candidate filler. Literal
// categories ($NUM, $DATE) match on value: 1 if the position's extracted
// value equals the candidate, else 0. Other categories use simPhi on the
// position's lexical word.
double positionSimilarity(const delex::AbstractUtterance& utterance,
                          std::size_t j, const std::string& candidate,
                          kb::Category category, const kb::Lexicon& lexicon,
                          const embed::EmbeddingTable& embeddings);

// Expected similarity under one alignment row:
//   sum_j row[j] * sim(x_j, candidate).
double localScore(const std::string& candidate, kb::Category category,
                  const delex::AbstractUtterance& utterance,
                  const nn::Vec& row, const kb::Lexicon& lexicon,
                  const embed::EmbeddingTable& embeddings);

struct ScoredCandidate {
  std::string token;
  double score = 0;
};

// Per slot, candidates by descending score; equal scores keep the
// candidate order of kb::candidates (ids ascending, literals by value).
using SlotCandidates = std::vector<std::vector<ScoredCandidate>>;

// `alignment` has one row per slot of `absLf`, in slot order. Throws
// EmptyCandidates carrying the slot index.
SlotCandidates buildCands(const delex::AbstractLogicalForm& absLf,
                          const kb::KnowledgeBase& kb,
                          const kb::Lexicon& lexicon,
                          const delex::AbstractUtterance& utterance,
                          const nn::Mat& alignment,
                          const embed::EmbeddingTable& embeddings);

struct GlobalOptions {
  // Literal uniqueness; off for the -GlobalHeur ablation.
  bool requireOnce = true;
  // Treat an empty denotation as a failure.
  bool requireNonEmpty = false;
};

// Substitutes `fillers` into the abstract tokens and requires that the
// result delinearizes, executes without error and (optionally) passes
// checkOnce. Never throws.
bool globalOk(std::span<const std::string> fillers,
              std::span<const std::string> absTokens,
              const kb::KnowledgeBase& kb, const GlobalOptions& options = {});

struct Assignment {
  std::vector<std::size_t> indices;
  std::vector<std::string> fillers;
  double score = 0;
  bool satisfiedGlobal = false;
};

struct InferResult {
  std::optional<Assignment> assignment;
  // Heap pops, each one a feasibility test.
  int steps = 0;
  // Total local score of each popped vector, in pop order.
  std::vector<double> poppedScores;
};

using Feasible = std::function<bool(const std::vector<std::size_t>& indices)>;

// Sum of the selected candidates' scores, accumulated in slot order.
double totalScore(const SlotCandidates& cands,
                  const std::vector<std::size_t>& indices);

// Best-first search over index vectors from {0}^l. Pops in order of
// descending total score, ties to the lexicographically smaller vector; each
// vector is expanded once. Stops at the first feasible pop or after `maxSteps`
// pops.
InferResult exactInfer(const SlotCandidates& cands, const Feasible& feasible,
                       int maxSteps);

InferResult exactInfer(const SlotCandidates& cands,
                       const delex::AbstractLogicalForm& absLf,
                       const kb::KnowledgeBase& kb, int maxSteps,
                       const GlobalOptions& options = {});

// Enumerates every index vector; same objective and tie-break as
// exactInfer. Throws TooLarge above 10^6 vectors.
std::optional<Assignment> bruteForceInfer(const SlotCandidates& cands,
                                          const Feasible& feasible);

std::optional<Assignment> bruteForceInfer(
    const SlotCandidates& cands, const delex::AbstractLogicalForm& absLf,
    const kb::KnowledgeBase& kb, const GlobalOptions& options = {});

// Top candidate of every slot, no global check (the -Inference ablation).
Assignment argmaxInfer(const SlotCandidates& cands);

}  // namespace zsp::infer

#endif  // ZSP_INFER_H_
