#ifndef ZSP_DELEX_H_
#define ZSP_DELEX_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zsp/kb.h"
#include "zsp/lf.h"

namespace zsp::delex {

enum class Pos : unsigned char { kNoun, kVerb, kAdj, kNum, kDate, kOther };

std::string_view posName(Pos pos);
std::optional<Pos> parsePos(std::string_view name);

struct AnnotatedToken {
  std::string surface;
  std::string lemma;  // Lowercase.
  Pos pos = Pos::kOther;
  // Parsed number or date for NUM / DATE tokens.
  std::optional<kb::Value> value;
};

// Utterance-side abstract tokens.
inline constexpr std::string_view kNoun = "NOUN";
inline constexpr std::string_view kVerb = "VERB";
inline constexpr std::string_view kAdj = "ADJ";
inline constexpr std::string_view kNum = "NUM";
inline constexpr std::string_view kDate = "DATE";
inline constexpr std::string_view kEnt = "ENT";

bool isAbstractWord(std::string_view token);

// Which rule produced an abstract-utterance position.
enum class Rule : unsigned char { kKept, kEntity, kDate, kNumber, kVerb, kNoun, kAdj };

struct AbstractUtterance {
  std::vector<std::string> tokens;
  std::vector<Rule> rules;
  // Original token indices behind each position, in order.
  std::vector<std::vector<std::size_t>> sources;
  // Lemmas of the original tokens behind each position, space-joined. This
  // is the lexical word used for similarity scoring.
  std::vector<std::string> words;
  // Number, date or entity id for NUM / DATE / ENT positions.
  std::vector<std::optional<kb::Value>> values;
  kb::ExtractedValues extracted;

  // Abstracted positions and their original token indices.
  std::map<std::size_t, std::vector<std::size_t>> provenance() const;
  // Tokens joined by spaces, with sentence punctuation attached.
  std::string text() const;
};

// Adjective lemmas that are unique to one source domain.
class AdjectiveStats {
 public:
  AdjectiveStats() = default;

  // `byDomain` maps each source domain to the adjective lemmas of its
  // training utterances.
  explicit AdjectiveStats(
      const std::map<std::string, std::set<std::string>>& byDomain);

  const std::set<std::string>& uniqueTo(std::string_view domain) const;

  // For a source domain: `lemma` is unique to it. For any other domain:
  // `lemma` occurs in no source domain.
  bool abstracts(std::string_view domain, std::string_view lemma) const;

 private:
  std::map<std::string, std::set<std::string>, std::less<>> unique_;
  std::set<std::string, std::less<>> seen_;
};

std::set<std::string> adjectiveLemmas(std::span<const AnnotatedToken> tokens);

// Rule order per token: entity names (greedy leftmost-longest match on
// lowercase surface forms), dates, numbers, then part of speech. Verbs other
// than be/do/have become VERB, nouns other than average/total/number become
// NOUN, adjectives become ADJ when the statistics say so. Abstract words
// already present are kept, so the function is idempotent.
AbstractUtterance delexUtterance(std::span<const AnnotatedToken> tokens,
                                 const kb::KnowledgeBase& kb,
                                 const AdjectiveStats& adjectives,
                                 std::string_view domain);

struct AbstractLogicalForm {
  std::vector<std::string> tokens;
  // Positions of slot tokens, left to right.
  std::vector<std::size_t> slots;
  // The constant or literal each slot replaced.
  std::vector<std::string> fillers;

  kb::Category category(std::size_t slot) const;
  std::string lambdaDcs() const;
};

// Throws UnknownConstant.
AbstractLogicalForm delexLogicalForm(const lf::LogicalForm& lf,
                                     const kb::KnowledgeBase& kb);

// Slot positions of an abstract token sequence.
std::vector<std::size_t> slotPositions(std::span<const std::string> tokens);

// Substitutes `fillers` into the slot positions of `tokens`.
std::vector<std::string> fillSlots(std::span<const std::string> tokens,
                                   std::span<const std::string> fillers);

// Whitespace/punctuation tokenizer with a small built-in lexicon, meant for
// interactive use only; datasets carry their own annotations.
std::vector<AnnotatedToken> tagText(std::string_view text);

}  // namespace zsp::delex

#endif  // ZSP_DELEX_H_
