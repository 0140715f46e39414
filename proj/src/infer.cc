#include "zsp/infer.h"

#include <algorithm>
#include <queue>
#include <set>

#include "zsp/errors.h"
#include "zsp/execute.h"
#include "zsp/lf.h"

namespace zsp::infer {

namespace {

bool isLiteral(kb::Category category) {
  return category == kb::Category::kNum || category == kb::Category::kDate;
}

struct Entry {
  double score;
  std::vector<std::size_t> indices;
};

// Max-heap order: higher score first, then the lexicographically smaller
// vector.
struct EntryLess {
  bool operator()(const Entry& a, const Entry& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.indices > b.indices;
  }
};

Assignment makeAssignment(const SlotCandidates& cands,
                          std::vector<std::size_t> indices, double score,
                          bool satisfied) {
  Assignment a;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    a.fillers.push_back(cands[i][indices[i]].token);
  }
  a.indices = std::move(indices);
  a.score = score;
  a.satisfiedGlobal = satisfied;
  return a;
}

Feasible globalPredicate(const SlotCandidates& cands,
                         const delex::AbstractLogicalForm& absLf,
                         const kb::KnowledgeBase& kb,
                         const GlobalOptions& options) {
  return [&cands, &absLf, &kb, options](const std::vector<std::size_t>& idx) {
    std::vector<std::string> fillers;
    fillers.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      fillers.push_back(cands[i][idx[i]].token);
    }
    return globalOk(fillers, absLf.tokens, kb, options);
  };
}

}  // namespace

double positionSimilarity(const delex::AbstractUtterance& utterance,
                          std::size_t j, const std::string& candidate,
                          kb::Category category, const kb::Lexicon& lexicon,
                          const embed::EmbeddingTable& embeddings) {
  if (isLiteral(category)) {
    const auto& v = utterance.values[j];
    return v && kb::valueText(*v) == candidate ? 1.0 : 0.0;
  }
  return embed::simPhi(utterance.words[j], candidate, lexicon, embeddings);
}

double localScore(const std::string& candidate, kb::Category category,
                  const delex::AbstractUtterance& utterance,
                  const nn::Vec& row, const kb::Lexicon& lexicon,
                  const embed::EmbeddingTable& embeddings) {
  if (static_cast<std::size_t>(row.size()) != utterance.tokens.size()) {
    throw DimMismatch("alignment row length " + std::to_string(row.size()) +
                      " vs utterance length " +
                      std::to_string(utterance.tokens.size()));
  }
  double total = 0;
  for (std::size_t j = 0; j < utterance.tokens.size(); ++j) {
    if (row[static_cast<Eigen::Index>(j)] == 0) continue;
    total += row[static_cast<Eigen::Index>(j)] *
             positionSimilarity(utterance, j, candidate, category, lexicon,
                                embeddings);
  }
  return total;
}

SlotCandidates buildCands(const delex::AbstractLogicalForm& absLf,
                          const kb::KnowledgeBase& kb,
                          const kb::Lexicon& lexicon,
                          const delex::AbstractUtterance& utterance,
                          const nn::Mat& alignment,
                          const embed::EmbeddingTable& embeddings) {
  if (static_cast<std::size_t>(alignment.rows()) != absLf.slots.size()) {
    throw DimMismatch("alignment has " + std::to_string(alignment.rows()) +
                      " rows for " + std::to_string(absLf.slots.size()) +
                      " slots");
  }
  SlotCandidates out(absLf.slots.size());
  for (std::size_t s = 0; s < absLf.slots.size(); ++s) {
    kb::Category category = absLf.category(s);
    std::vector<std::string> tokens;
    try {
      tokens = kb::candidates(kb, category, utterance.extracted);
    } catch (const EmptyCandidates&) {
      throw EmptyCandidates(s, std::string(kb::categoryToken(category)));
    }
    nn::Vec row = alignment.row(static_cast<Eigen::Index>(s)).transpose();
    for (auto& t : tokens) {
      double score = localScore(t, category, utterance, row, lexicon, embeddings);
      out[s].push_back({std::move(t), score});
    }
    std::stable_sort(out[s].begin(), out[s].end(),
                     [](const ScoredCandidate& a, const ScoredCandidate& b) {
                       return a.score > b.score;
                     });
  }
  return out;
}

bool globalOk(std::span<const std::string> fillers,
              std::span<const std::string> absTokens,
              const kb::KnowledgeBase& kb, const GlobalOptions& options) {
  try {
    std::vector<std::string> tokens = delex::fillSlots(absTokens, fillers);
    lf::LogicalForm form = lf::delinearize(tokens);
    if (options.requireOnce && !lf::checkOnce(form)) return false;
    lf::ExecOutcome outcome = lf::execute(form, kb);
    if (!outcome.ok()) return false;
    if (options.requireNonEmpty && outcome.denotation().values.empty()) {
      return false;
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

double totalScore(const SlotCandidates& cands,
                  const std::vector<std::size_t>& indices) {
  double total = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    total += cands[i][indices[i]].score;
  }
  return total;
}

InferResult exactInfer(const SlotCandidates& cands, const Feasible& feasible,
                       int maxSteps) {
  InferResult result;
  for (const auto& c : cands) {
    if (c.empty()) return result;
  }
  std::priority_queue<Entry, std::vector<Entry>, EntryLess> horizon;
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> start(cands.size(), 0);
  seen.insert(start);
  horizon.push({totalScore(cands, start), start});
  while (!horizon.empty() && result.steps < maxSteps) {
    Entry top = horizon.top();
    horizon.pop();
    ++result.steps;
    result.poppedScores.push_back(top.score);
    if (feasible(top.indices)) {
      result.assignment =
          makeAssignment(cands, std::move(top.indices), top.score, true);
      return result;
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (top.indices[i] + 1 >= cands[i].size()) continue;
      std::vector<std::size_t> next = top.indices;
      ++next[i];
      if (seen.insert(next).second) {
        horizon.push({totalScore(cands, next), std::move(next)});
      }
    }
  }
  return result;
}

InferResult exactInfer(const SlotCandidates& cands,
                       const delex::AbstractLogicalForm& absLf,
                       const kb::KnowledgeBase& kb, int maxSteps,
                       const GlobalOptions& options) {
  return exactInfer(cands, globalPredicate(cands, absLf, kb, options),
                    maxSteps);
}

std::optional<Assignment> bruteForceInfer(const SlotCandidates& cands,
                                          const Feasible& feasible) {
  double size = 1;
  for (const auto& c : cands) {
    if (c.empty()) return std::nullopt;
    size *= static_cast<double>(c.size());
  }
  if (size > 1e6) {
    throw TooLarge("assignment space of " + std::to_string(size) +
                   " exceeds 10^6");
  }
  std::optional<Entry> best;
  std::vector<std::size_t> idx(cands.size(), 0);
  // Lexicographic enumeration, so the first vector reaching the best score is
  // the lexicographically smallest one.
  while (true) {
    double score = totalScore(cands, idx);
    if ((!best || score > best->score) && feasible(idx)) best = Entry{score, idx};
    bool done = true;
    for (std::size_t i = cands.size(); i > 0; --i) {
      if (++idx[i - 1] < cands[i - 1].size()) {
        done = false;
        break;
      }
      idx[i - 1] = 0;
    }
    if (done) break;
  }
  if (!best) return std::nullopt;
  return makeAssignment(cands, std::move(best->indices), best->score, true);
}

std::optional<Assignment> bruteForceInfer(
    const SlotCandidates& cands, const delex::AbstractLogicalForm& absLf,
    const kb::KnowledgeBase& kb, const GlobalOptions& options) {
  return bruteForceInfer(cands, globalPredicate(cands, absLf, kb, options));
}

Assignment argmaxInfer(const SlotCandidates& cands) {
  std::vector<std::size_t> idx(cands.size(), 0);
  double score = totalScore(cands, idx);
  return makeAssignment(cands, std::move(idx), score, false);
}

}  // namespace zsp::infer
