#include "zsp/delex.h"

#include <algorithm>
#include <cctype>

#include "zsp/errors.h"

namespace zsp::delex {

namespace {

constexpr std::string_view kPosNames[] = {"NOUN", "VERB", "ADJ",
                                          "NUM",  "DATE", "OTHER"};

// Verb lemmas that carry no domain content.
const std::set<std::string, std::less<>> kKeptVerbs = {"be", "do", "have"};
// Nouns that denote domain-general operations.
const std::set<std::string, std::less<>> kKeptNouns = {"average", "total",
                                                       "number"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

bool isPunct(std::string_view token) {
  return token.size() == 1 && std::string_view("?.!,;:").find(token[0]) !=
                                  std::string_view::npos;
}

struct NameEntry {
  std::vector<std::string> words;
  std::string id;
};

std::vector<std::string> splitWords(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string_view posName(Pos pos) { return kPosNames[static_cast<int>(pos)]; }

std::optional<Pos> parsePos(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kPosNames); ++i) {
    if (kPosNames[i] == name) return static_cast<Pos>(i);
  }
  return std::nullopt;
}

bool isAbstractWord(std::string_view token) {
  return token == kNoun || token == kVerb || token == kAdj || token == kNum ||
         token == kDate || token == kEnt;
}

std::map<std::size_t, std::vector<std::size_t>> AbstractUtterance::provenance()
    const {
  std::map<std::size_t, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (rules[i] != Rule::kKept) out[i] = sources[i];
  }
  return out;
}

std::string AbstractUtterance::text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty() && !isPunct(t)) out += ' ';
    out += t;
  }
  return out;
}

AdjectiveStats::AdjectiveStats(
    const std::map<std::string, std::set<std::string>>& byDomain) {
  std::map<std::string, int> domainCount;
  for (const auto& [domain, lemmas] : byDomain) {
    for (const auto& lemma : lemmas) {
      ++domainCount[lemma];
      seen_.insert(lemma);
    }
  }
  for (const auto& [domain, lemmas] : byDomain) {
    auto& unique = unique_[domain];
    for (const auto& lemma : lemmas) {
      if (domainCount[lemma] == 1) unique.insert(lemma);
    }
  }
}

const std::set<std::string>& AdjectiveStats::uniqueTo(
    std::string_view domain) const {
  static const std::set<std::string> kEmpty;
  auto it = unique_.find(domain);
  return it == unique_.end() ? kEmpty : it->second;
}

bool AdjectiveStats::abstracts(std::string_view domain,
                               std::string_view lemma) const {
  auto it = unique_.find(domain);
  if (it != unique_.end()) return it->second.count(std::string(lemma)) > 0;
  return seen_.find(lemma) == seen_.end();
}

std::set<std::string> adjectiveLemmas(std::span<const AnnotatedToken> tokens) {
  std::set<std::string> out;
  for (const auto& t : tokens) {
    if (t.pos == Pos::kAdj) out.insert(t.lemma);
  }
  return out;
}

AbstractUtterance delexUtterance(std::span<const AnnotatedToken> tokens,
                                 const kb::KnowledgeBase& kb,
                                 const AdjectiveStats& adjectives,
                                 std::string_view domain) {
  std::map<std::string, std::vector<NameEntry>> byFirstWord;
  for (const auto& e : kb.entities()) {
    for (const auto& name : e.names) {
      std::vector<std::string> words = splitWords(name);
      if (words.empty()) continue;
      byFirstWord[words.front()].push_back({words, e.id});
    }
  }
  std::vector<std::string> surfaces;
  surfaces.reserve(tokens.size());
  for (const auto& t : tokens) surfaces.push_back(lower(t.surface));

  AbstractUtterance out;
  auto push = [&](std::string_view token, Rule rule, std::size_t begin,
                  std::size_t end, std::optional<kb::Value> value) {
    out.tokens.emplace_back(token);
    out.rules.push_back(rule);
    std::vector<std::size_t> src;
    std::string words;
    for (std::size_t k = begin; k < end; ++k) {
      src.push_back(k);
      if (!words.empty()) words += ' ';
      words += tokens[k].lemma.empty() ? surfaces[k] : tokens[k].lemma;
    }
    out.sources.push_back(std::move(src));
    out.words.push_back(std::move(words));
    out.values.push_back(std::move(value));
  };

  std::size_t i = 0;
  while (i < tokens.size()) {
    const AnnotatedToken& tok = tokens[i];
    if (isAbstractWord(tok.surface)) {
      push(tok.surface, Rule::kKept, i, i + 1, std::nullopt);
      ++i;
      continue;
    }
    // Longest entity name starting here; the smallest id wins among equals.
    const NameEntry* best = nullptr;
    if (auto it = byFirstWord.find(surfaces[i]); it != byFirstWord.end()) {
      for (const NameEntry& entry : it->second) {
        std::size_t n = entry.words.size();
        if (i + n > tokens.size()) continue;
        if (!std::equal(entry.words.begin(), entry.words.end(),
                        surfaces.begin() + i)) {
          continue;
        }
        if (!best || n > best->words.size() ||
            (n == best->words.size() && entry.id < best->id)) {
          best = &entry;
        }
      }
    }
    if (best) {
      std::size_t n = best->words.size();
      push(kEnt, Rule::kEntity, i, i + n, kb::Value(best->id));
      out.extracted.entities.push_back(best->id);
      i += n;
      continue;
    }
    if (tok.pos == Pos::kDate) {
      // Adjacent tokens annotated with the same date form one mention.
      std::size_t j = i + 1;
      while (j < tokens.size() && tokens[j].pos == Pos::kDate &&
             tokens[j].value == tok.value) {
        ++j;
      }
      push(kDate, Rule::kDate, i, j, tok.value);
      if (tok.value) {
        if (auto* d = std::get_if<Date>(&*tok.value)) {
          out.extracted.dates.push_back(*d);
        }
      }
      i = j;
      continue;
    }
    if (tok.pos == Pos::kNum) {
      push(kNum, Rule::kNumber, i, i + 1, tok.value);
      if (tok.value) {
        if (auto* q = std::get_if<Rational>(&*tok.value)) {
          out.extracted.numbers.push_back(*q);
        }
      }
      ++i;
      continue;
    }
    const std::string& lemma = tok.lemma.empty() ? surfaces[i] : tok.lemma;
    if (tok.pos == Pos::kVerb && !kKeptVerbs.count(lemma)) {
      push(kVerb, Rule::kVerb, i, i + 1, std::nullopt);
    } else if (tok.pos == Pos::kNoun && !kKeptNouns.count(lemma)) {
      push(kNoun, Rule::kNoun, i, i + 1, std::nullopt);
    } else if (tok.pos == Pos::kAdj && adjectives.abstracts(domain, lemma)) {
      push(kAdj, Rule::kAdj, i, i + 1, std::nullopt);
    } else {
      push(tok.surface, Rule::kKept, i, i + 1, std::nullopt);
    }
    ++i;
  }
  return out;
}

kb::Category AbstractLogicalForm::category(std::size_t slot) const {
  return *kb::parseCategory(tokens[slots[slot]]);
}

std::string AbstractLogicalForm::lambdaDcs() const {
  return lf::toLambdaDcs(lf::delinearize(tokens, {.allowSlots = true}));
}

AbstractLogicalForm delexLogicalForm(const lf::LogicalForm& lf,
                                     const kb::KnowledgeBase& kb) {
  AbstractLogicalForm out;
  for (const lf::LfToken& tok : lf::linearizeWithRoles(lf)) {
    std::optional<kb::Category> category;
    switch (tok.role) {
      case lf::TokenRole::kSyntax:
        break;
      case lf::TokenRole::kConstant:
        category = kb.categoryOf(tok.text);
        break;
      case lf::TokenRole::kNumber:
        category = kb::Category::kNum;
        break;
      case lf::TokenRole::kDate:
        category = kb::Category::kDate;
        break;
    }
    if (category) {
      out.slots.push_back(out.tokens.size());
      out.fillers.push_back(tok.text);
      out.tokens.emplace_back(kb::categoryToken(*category));
    } else {
      out.tokens.push_back(tok.text);
    }
  }
  return out;
}

std::vector<std::size_t> slotPositions(std::span<const std::string> tokens) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (kb::isSlotToken(tokens[i])) out.push_back(i);
  }
  return out;
}

std::vector<std::string> fillSlots(std::span<const std::string> tokens,
                                   std::span<const std::string> fillers) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  std::size_t k = 0;
  for (auto& t : out) {
    if (kb::isSlotToken(t)) {
      if (k >= fillers.size()) throw Error("too few slot fillers");
      t = fillers[k++];
    }
  }
  if (k != fillers.size()) throw Error("too many slot fillers");
  return out;
}

namespace {

const std::set<std::string, std::less<>> kFunctionWords = {
    "a",    "an",    "the",   "what",  "which", "who",  "whose", "when",
    "where", "how",  "is",    "are",   "was",   "were", "of",    "in",
    "on",   "at",    "to",    "for",   "with",  "by",   "from",  "and",
    "or",   "no",    "not",   "than",  "that",  "this", "these", "those",
    "as",   "there", "their", "its",   "me",    "show", "list",  "find",
    "give", "all",   "any",   "each",  "every", "after", "before", "since",
    "about", "per",  "it",    "they"};

const std::map<std::string, std::int64_t, std::less<>> kNumberWords = {
    {"zero", 0}, {"one", 1},   {"two", 2},   {"three", 3}, {"four", 4},
    {"five", 5}, {"six", 6},   {"seven", 7}, {"eight", 8}, {"nine", 9},
    {"ten", 10}, {"eleven", 11}, {"twelve", 12}};

const std::set<std::string, std::less<>> kAdjectives = {
    "more",    "less",   "most",   "least",  "many",  "few",     "same",
    "minimum", "maximum", "high",  "low",    "large", "small",   "long",
    "short",   "big",    "cheap",  "expensive", "new", "old",    "fewest",
    "highest", "lowest", "largest", "smallest", "earliest", "latest"};

const std::map<std::string, std::string, std::less<>> kIrregularVerbs = {
    {"is", "be"},   {"are", "be"},  {"was", "be"},    {"were", "be"},
    {"be", "be"},   {"has", "have"}, {"have", "have"}, {"had", "have"},
    {"do", "do"},   {"does", "do"},  {"did", "do"}};

std::string nounLemma(const std::string& w) {
  if (w.size() > 4 && w.ends_with("ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 4 && w.ends_with("sses")) return w.substr(0, w.size() - 2);
  if (w.size() > 3 && w.ends_with('s') && !w.ends_with("ss")) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

}  // namespace

std::vector<AnnotatedToken> tagText(std::string_view text) {
  std::vector<std::string> raw;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) raw.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else if (std::string_view("?!,;:").find(ch) != std::string_view::npos ||
               (ch == '.' && cur.find_first_not_of("0123456789") !=
                                 std::string::npos)) {
      flush();
      raw.emplace_back(1, ch);
    } else {
      cur += ch;
    }
  }
  flush();

  std::vector<AnnotatedToken> out;
  for (const std::string& surface : raw) {
    AnnotatedToken tok;
    tok.surface = surface;
    std::string w = lower(surface);
    tok.lemma = w;
    if (isPunct(w)) {
      tok.pos = Pos::kOther;
    } else if (auto d = Date::parse(w); d && (d->month > 0 || (d->year >= 1900 &&
                                                              d->year <= 2100))) {
      tok.pos = Pos::kDate;
      tok.value = *d;
    } else if (auto q = Rational::parse(w)) {
      tok.pos = Pos::kNum;
      tok.value = *q;
    } else if (auto it = kNumberWords.find(w); it != kNumberWords.end()) {
      tok.pos = Pos::kNum;
      tok.value = Rational(it->second);
    } else if (auto v = kIrregularVerbs.find(w); v != kIrregularVerbs.end()) {
      tok.pos = Pos::kVerb;
      tok.lemma = v->second;
    } else if (kFunctionWords.count(w)) {
      tok.pos = Pos::kOther;
    } else if (kAdjectives.count(w)) {
      tok.pos = Pos::kAdj;
    } else if (w.size() > 4 && w.ends_with("ed")) {
      tok.pos = Pos::kVerb;
      tok.lemma = w.substr(0, w.size() - 2);
    } else {
      tok.pos = Pos::kNoun;
      tok.lemma = nounLemma(w);
    }
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace zsp::delex
