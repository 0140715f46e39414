#include "zsp/synth.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "zsp/errors.h"
#include "zsp/execute.h"
#include "zsp/nn/params.h"

namespace zsp::pipeline {

namespace {

using delex::AnnotatedToken;
using delex::Pos;

struct Noun {
  const char* sg;
  const char* pl;
};

struct DomainDef {
  const char* name;
  const char* mainType;
  Noun mainNoun;
  std::vector<const char*> mainNames;
  const char* sec1Type;
  Noun sec1Noun;
  std::vector<const char*> sec1Names;
  const char* sec2Type;
  Noun sec2Noun;
  std::vector<const char*> sec2Names;
  // Main -> Sec1, the counted relation.
  const char* rel1;
  Noun rel1Noun;
  const char* countVerb;  // Third person singular.
  const char* countVerbLemma;
  // Main -> Sec2.
  const char* rel2;
  const char* rel2Noun;
  const char* relNum;
  Noun relNumNoun;  // {surface, lemma}.
  const char* relNumPhrase;
  const char* entNum;
  Noun entNumNoun;  // {surface, lemma}.
  const char* entNumPhrase;
  const char* relDate;
  const char* dateVerb;  // Participle.
  const char* dateVerbLemma;
  const char* relDatePhrase;
  const char* unary;
  const char* adjective;
};

const std::vector<DomainDef>& domainDefs() {
  static const std::vector<DomainDef> defs = {
      {"calendar", "Meeting", {"meeting", "meetings"},
       {"weekly standup", "quarterly review", "design sync", "team lunch",
        "kickoff", "retrospective"},
       "Person", {"person", "people"}, {"alice", "bob", "carol", "dave"},
       "Room", {"room", "rooms"}, {"aurora", "cedar", "maple"},
       "Attendee", {"attendee", "attendees"}, "includes", "include",
       "Location", "location",
       "Duration", {"duration", "duration"}, "duration",
       "Budget", {"budget", "budget"}, "budget",
       "MeetingDate", "scheduled", "schedule", "scheduled date",
       "Important", "important"},
      {"housing", "Apartment", {"apartment", "apartments"},
       {"sunset lofts", "harbor view", "elm court", "park plaza",
        "river flats", "oak terrace"},
       "Amenity", {"amenity", "amenities"}, {"pool", "gym", "sauna", "garage"},
       "Neighborhood", {"neighborhood", "neighborhoods"},
       {"midtown", "soho", "riverside"},
       "HasAmenity", {"amenity", "amenities"}, "offers", "offer",
       "Area", "area",
       "Size", {"size", "size"}, "size",
       "Rent", {"rent", "rent"}, "rent",
       "ListingDate", "listed", "list", "listing date",
       "Furnished", "furnished"},
      {"publications", "Article", {"article", "articles"},
       {"neural parsing", "graph kernels", "sparse coding", "latent topics",
        "deep retrieval", "causal inference"},
       "Researcher", {"researcher", "researchers"},
       {"turing", "hopper", "lovelace", "knuth"},
       "Topic", {"topic", "topics"}, {"machine learning", "databases", "robotics"},
       "Writer", {"writer", "writers"}, "credits", "credit",
       "Subject", "subject",
       "Citations", {"citations", "citation"}, "citations",
       "Downloads", {"downloads", "download"}, "downloads",
       "PubYear", "published", "publish", "publication year",
       "Influential", "influential"},
      {"recipes", "Recipe", {"recipe", "recipes"},
       {"lemon tart", "beef stew", "pad thai", "minestrone", "paella",
        "ratatouille"},
       "Ingredient", {"ingredient", "ingredients"},
       {"garlic", "basil", "saffron", "ginger"},
       "Chef", {"chef", "chefs"}, {"gordon", "julia", "massimo"},
       "IngredientOf", {"ingredient", "ingredients"}, "needs", "need",
       "Author", "author",
       "Servings", {"servings", "serving"}, "servings",
       "Calories", {"calories", "calorie"}, "calories",
       "PostingDate", "posted", "post", "posting date",
       "Vegetarian", "vegetarian"},
      {"restaurants", "Restaurant", {"restaurant", "restaurants"},
       {"golden wok", "blue fin", "la piazza", "green leaf", "spice route",
        "ember grill"},
       "Dish", {"dish", "dishes"}, {"dumplings", "sushi", "risotto", "tacos"},
       "City", {"city", "cities"}, {"boston", "denver", "austin"},
       "Serves", {"dish", "dishes"}, "serves", "serve",
       "InCity", "city",
       "StarRating", {"stars", "star"}, "star rating",
       "Price", {"price", "price"}, "price",
       "OpeningDate", "opened", "open", "opening date",
       "Cozy", "cozy"},
      {"social", "User", {"user", "users"},
       {"ann lee", "raj patel", "mia chen", "omar ali", "eva ruiz",
        "leo park"},
       "Group", {"group", "groups"},
       {"chess club", "hiking crew", "book circle", "film buffs"},
       "Company", {"company", "companies"}, {"acme", "globex", "initech"},
       "MemberOf", {"group", "groups"}, "joins", "join",
       "Employer", "employer",
       "FollowerCount", {"followers", "follower"}, "follower count",
       "Age", {"age", "age"}, "age",
       "SignupDate", "registered", "register", "registration date",
       "Verified", "verified"},
  };
  return defs;
}

// Words that describe many constants and get no concept of their own.
const std::set<std::string>& genericWords() {
  static const std::set<std::string> words = {"date", "year", "count"};
  return words;
}

const char* kNumberWords[] = {"zero", "one", "two", "three", "four", "five",
                              "six", "seven", "eight", "nine", "ten"};

struct Comparative {
  const char* words;
  const char* op;
};

const Comparative kCountCmp[] = {{"no more than", "<="},
                                 {"at least", ">="},
                                 {"more than", ">"},
                                 {"fewer than", "<"}};
const Comparative kValueCmp[] = {{"at most", "<="},
                                 {"at least", ">="},
                                 {"more than", ">"},
                                 {"less than", "<"}};
const char* kPrepositions[] = {"in", "at", "from"};

std::vector<std::string> splitWords(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = text.find(' ', i);
    if (j == std::string_view::npos) j = text.size();
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::string entityId(std::string_view name) {
  std::string id;
  bool upper = true;
  for (char c : name) {
    if (c == ' ') {
      upper = true;
      continue;
    }
    id += upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                : c;
    upper = false;
  }
  return id;
}

class Utterance {
 public:
  Utterance& word(std::string_view surface, Pos pos = Pos::kOther) {
    return token(std::string(surface), std::string(surface), pos);
  }
  Utterance& words(std::string_view text) {
    for (const auto& w : splitWords(text)) word(w);
    return *this;
  }
  Utterance& token(std::string surface, std::string lemma, Pos pos) {
    tokens_.push_back({std::move(surface), std::move(lemma), pos, std::nullopt});
    return *this;
  }
  Utterance& noun(const Noun& n, bool plural) {
    return token(plural ? n.pl : n.sg, n.sg, Pos::kNoun);
  }
  Utterance& entity(std::string_view name) {
    for (const auto& w : splitWords(name)) word(w, Pos::kNoun);
    return *this;
  }
  Utterance& number(int n, bool asWord) {
    std::string surface = asWord && n <= 10 ? kNumberWords[n] : std::to_string(n);
    tokens_.push_back({surface, surface, Pos::kNum, Rational(n)});
    return *this;
  }
  Utterance& year(int y) {
    std::string surface = std::to_string(y);
    tokens_.push_back({surface, surface, Pos::kDate, Date{y, 0, 0}});
    return *this;
  }
  std::vector<AnnotatedToken> take() { return std::move(tokens_); }

 private:
  std::vector<AnnotatedToken> tokens_;
};

struct Instance {
  std::vector<AnnotatedToken> tokens;
  std::string lf;
};

// Per-domain generation state.
struct DomainKb {
  const DomainDef* def;
  std::vector<std::string> mainNames, sec1Names, sec2Names;
};

std::string id(const std::string& name) { return entityId(name); }

using Template = std::function<Instance(const DomainKb&, nn::Rng&)>;

template <typename T, std::size_t N>
const T& pick(const T (&items)[N], nn::Rng& rng) {
  return items[rng.below(N)];
}

const std::string& pick(const std::vector<std::string>& items, nn::Rng& rng) {
  return items[rng.below(items.size())];
}

std::string typeLf(const DomainDef& d) {
  return std::string("(type ") + d.mainType + ")";
}

std::vector<Template> templates() {
  std::vector<Template> t;
  // Counting comparative, two surface variants.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    const Comparative& c = pick(kCountCmp, rng);
    int n = 1 + static_cast<int>(rng.below(4));
    Utterance u;
    u.word("what").noun(d.mainNoun, true).token("have", "have", Pos::kVerb);
    u.words(c.words).number(n, rng.below(3) == 0).noun(d.rel1Noun, true).word("?");
    return Instance{u.take(), "(and " + typeLf(d) + " (compare " + c.op +
                                  " (countrev " + d.rel1 + ") (num " +
                                  std::to_string(n) + ")))"};
  });
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    const Comparative& c = pick(kCountCmp, rng);
    int n = 1 + static_cast<int>(rng.below(4));
    Utterance u;
    u.word("which").noun(d.mainNoun, false).token(d.countVerb, d.countVerbLemma,
                                                  Pos::kVerb);
    u.words(c.words).number(n, rng.below(3) == 0).noun(d.rel1Noun, true).word("?");
    return Instance{u.take(), "(and " + typeLf(d) + " (compare " + c.op +
                                  " (countrev " + d.rel1 + ") (num " +
                                  std::to_string(n) + ")))"};
  });
  // Numeric comparative.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    const Comparative& c = pick(kValueCmp, rng);
    int n = 2 + static_cast<int>(rng.below(8));
    Utterance u;
    u.noun(d.mainNoun, true).word("whose");
    u.token(d.relNumNoun.sg, d.relNumNoun.pl, Pos::kNoun);
    u.token("is", "be", Pos::kVerb).words(c.words).number(n, false);
    return Instance{u.take(), "(and " + typeLf(d) + " (compare " + c.op + " " +
                                  d.relNum + " (num " + std::to_string(n) +
                                  ")))"};
  });
  // Join with an explicit relation noun.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    const std::string& e = pick(k.sec1Names, rng);
    Utterance u;
    u.noun(d.mainNoun, true).word("with").noun(d.rel1Noun, false).entity(e);
    return Instance{u.take(), "(and " + typeLf(d) + " (join " + d.rel1 +
                                  " (entity " + id(e) + ")))"};
  });
  // Join through a preposition only.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    const std::string& e = pick(k.sec2Names, rng);
    Utterance u;
    u.noun(d.mainNoun, true).word(pick(kPrepositions, rng)).entity(e);
    return Instance{u.take(), "(and " + typeLf(d) + " (join " + d.rel2 +
                                  " (entity " + id(e) + ")))"};
  });
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    const std::string& e = pick(k.sec2Names, rng);
    Utterance u;
    u.noun(d.mainNoun, true).word("whose");
    u.token(d.rel2Noun, d.rel2Noun, Pos::kNoun);
    u.token("is", "be", Pos::kVerb).entity(e);
    return Instance{u.take(), "(and " + typeLf(d) + " (join " + d.rel2 +
                                  " (entity " + id(e) + ")))"};
  });
  // Date comparative and date join.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    bool after = rng.below(2) == 0;
    int y = 2011 + static_cast<int>(rng.below(9));
    Utterance u;
    u.noun(d.mainNoun, true).token(d.dateVerb, d.dateVerbLemma, Pos::kVerb);
    u.word(after ? "after" : "before").year(y);
    return Instance{u.take(), "(and " + typeLf(d) + " (compare " +
                                  (after ? ">" : "<") + " " + d.relDate +
                                  " (date " + std::to_string(y) + ")))"};
  });
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    int y = 2010 + static_cast<int>(rng.below(11));
    Utterance u;
    u.noun(d.mainNoun, true).token(d.dateVerb, d.dateVerbLemma, Pos::kVerb);
    u.word("in").year(y);
    return Instance{u.take(), "(and " + typeLf(d) + " (join " + d.relDate +
                                  " (date " + std::to_string(y) + ")))"};
  });
  // Unary filter.
  t.push_back([](const DomainKb& k, nn::Rng&) {
    const DomainDef& d = *k.def;
    Utterance u;
    u.word("which").noun(d.mainNoun, true).token("are", "be", Pos::kVerb);
    u.word(d.adjective, Pos::kAdj).word("?");
    return Instance{u.take(), "(and " + typeLf(d) + " (unary " + d.unary + "))"};
  });
  // Superlative.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    bool highest = rng.below(2) == 0;
    Utterance u;
    u.word("which").noun(d.mainNoun, false).token("has", "have", Pos::kVerb);
    u.word("the").word(highest ? "highest" : "lowest", Pos::kAdj);
    u.token(d.entNumNoun.sg, d.entNumNoun.pl, Pos::kNoun).word("?");
    return Instance{u.take(), std::string("(") +
                                  (highest ? "argmax " : "argmin ") +
                                  d.entNum + " " + typeLf(d) + ")"};
  });
  // Aggregate.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    bool average = rng.below(2) == 0;
    Utterance u;
    u.word("what").token("is", "be", Pos::kVerb).word("the");
    u.word(average ? "average" : "total", Pos::kNoun);
    u.token(d.entNumNoun.sg, d.entNumNoun.pl, Pos::kNoun);
    u.words("of all").noun(d.mainNoun, true).word("?");
    return Instance{u.take(), std::string("(") + (average ? "avg " : "sum ") +
                                  d.entNum + " " + typeLf(d) + ")"};
  });
  // Reverse join.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    const std::string& e = pick(k.mainNames, rng);
    Utterance u;
    u.noun(d.rel1Noun, true).word("of").entity(e);
    return Instance{u.take(), std::string("(reverse (join ") + d.rel1 +
                                  " (entity " + id(e) + ")))"};
  });
  // Union of two entities.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    std::size_t i = rng.below(k.sec1Names.size());
    std::size_t j = rng.below(k.sec1Names.size() - 1);
    if (j >= i) ++j;
    const std::string& a = k.sec1Names[i];
    const std::string& b = k.sec1Names[j];
    Utterance u;
    u.noun(d.mainNoun, true).word("with").noun(d.rel1Noun, false).entity(a);
    u.word("or").entity(b);
    return Instance{u.take(), "(and " + typeLf(d) + " (join " + d.rel1 +
                                  " (or (entity " + id(a) + ") (entity " +
                                  id(b) + "))))"};
  });
  // Conjunction of a unary filter and a counting comparative.
  t.push_back([](const DomainKb& k, nn::Rng& rng) {
    const DomainDef& d = *k.def;
    const Comparative& c = pick(kCountCmp, rng);
    int n = 1 + static_cast<int>(rng.below(3));
    Utterance u;
    u.word("which").word(d.adjective, Pos::kAdj).noun(d.mainNoun, true);
    u.token("have", "have", Pos::kVerb).words(c.words).number(n, false);
    u.noun(d.rel1Noun, true).word("?");
    return Instance{u.take(), "(and (and " + typeLf(d) + " (unary " + d.unary +
                                  ")) (compare " + c.op + " (countrev " +
                                  d.rel1 + ") (num " + std::to_string(n) +
                                  ")))"};
  });
  return t;
}

kb::LoadedKb buildKb(const DomainDef& d, nn::Rng& rng) {
  kb::KbContent c;
  c.domain = d.name;
  c.entityTypes = {d.mainType, d.sec1Type, d.sec2Type};
  using kb::Category;
  using kb::ObjectKind;
  c.relations = {
      {d.rel1, d.mainType, ObjectKind::kEntity, d.sec1Type, false, Category::kRel},
      {d.rel2, d.mainType, ObjectKind::kEntity, d.sec2Type, false, Category::kRel},
      {d.relNum, d.mainType, ObjectKind::kNumber, "", false, Category::kRelNum},
      {d.entNum, d.mainType, ObjectKind::kNumber, "", false, Category::kEntNum},
      {d.relDate, d.mainType, ObjectKind::kDate, "", false, Category::kRelDate},
      {d.unary, d.mainType, ObjectKind::kNone, "", true, Category::kRelUnary},
  };
  kb::Lexicon lex;
  lex.set(d.mainType, d.mainNoun.sg);
  lex.set(d.sec1Type, d.sec1Noun.sg);
  lex.set(d.sec2Type, d.sec2Noun.sg);
  lex.set(d.rel1, d.rel1Noun.sg);
  lex.set(d.rel2, d.rel2Noun);
  lex.set(d.relNum, d.relNumPhrase);
  lex.set(d.entNum, d.entNumPhrase);
  lex.set(d.relDate, d.relDatePhrase);
  lex.set(d.unary, d.adjective);

  auto addEntities = [&](const std::vector<const char*>& names, const char* type) {
    for (const char* n : names) {
      c.entities.push_back({entityId(n), type, {n}});
      lex.set(entityId(n), n);
    }
  };
  addEntities(d.mainNames, d.mainType);
  addEntities(d.sec1Names, d.sec1Type);
  addEntities(d.sec2Names, d.sec2Type);

  std::vector<int> entNumValues(d.mainNames.size());
  std::iota(entNumValues.begin(), entNumValues.end(), 1);
  rng.shuffle(entNumValues);
  std::size_t unaryCount = 0;
  for (std::size_t m = 0; m < d.mainNames.size(); ++m) {
    std::string s = entityId(d.mainNames[m]);
    std::vector<std::size_t> order(d.sec1Names.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::size_t k = 1 + rng.below(d.sec1Names.size());
    for (std::size_t i = 0; i < k; ++i) {
      c.triples.push_back({s, d.rel1, kb::Value(entityId(d.sec1Names[order[i]]))});
    }
    c.triples.push_back(
        {s, d.rel2,
         kb::Value(entityId(d.sec2Names[rng.below(d.sec2Names.size())]))});
    c.triples.push_back(
        {s, d.relNum, kb::Value(Rational(1 + static_cast<int>(rng.below(10))))});
    c.triples.push_back({s, d.entNum, kb::Value(Rational(entNumValues[m] * 10))});
    c.triples.push_back(
        {s, d.relDate, kb::Value(Date{2010 + static_cast<int>(rng.below(11)), 0, 0})});
    // Alternate so that the filter is neither empty nor everything.
    bool flag = m % 2 == 0 ? rng.below(4) != 0 : rng.below(4) == 0;
    if (flag) {
      c.triples.push_back({s, d.unary, std::nullopt});
      ++unaryCount;
    }
  }
  if (unaryCount == 0) {
    c.triples.push_back({entityId(d.mainNames[0]), d.unary, std::nullopt});
  }

  return kb::LoadedKb{kb::KnowledgeBase(std::move(c)), std::move(lex)};
}

// Disjoint-set forest over words.
class WordSets {
 public:
  void join(const std::vector<std::string>& words) {
    std::vector<std::string> w;
    for (const auto& x : words) {
      for (auto& y : splitWords(x)) {
        if (!genericWords().contains(y)) w.push_back(std::move(y));
      }
    }
    for (const auto& x : w) add(x);
    for (std::size_t i = 1; i < w.size(); ++i) {
      std::string a = find(w[0]), b = find(w[i]);
      if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }
  }
  void add(const std::string& w) { parent_.try_emplace(w, w); }
  std::string find(std::string w) {
    while (parent_.at(w) != w) w = parent_.at(w);
    return w;
  }
  std::vector<std::string> words() const {
    std::vector<std::string> out;
    for (const auto& [w, p] : parent_) out.push_back(w);
    return out;
  }

 private:
  std::map<std::string, std::string> parent_;
};

}  // namespace

const std::vector<std::string>& synthDomainNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& d : domainDefs()) out.emplace_back(d.name);
    return out;
  }();
  return names;
}

SynthCorpus synthGen(const SynthConfig& config) {
  std::vector<const DomainDef*> chosen;
  if (config.domains.empty()) {
    for (const auto& d : domainDefs()) chosen.push_back(&d);
  } else {
    for (const auto& name : config.domains) {
      auto it = std::find_if(domainDefs().begin(), domainDefs().end(),
                             [&](const DomainDef& d) { return name == d.name; });
      if (it == domainDefs().end()) {
        throw ConfigError("unknown synthetic domain '" + name + "'");
      }
      if (std::find(chosen.begin(), chosen.end(), &*it) != chosen.end()) {
        throw ConfigError("domain '" + name + "' listed twice");
      }
      chosen.push_back(&*it);
    }
  }
  if (chosen.size() < 2) throw ConfigError("need at least two domains");
  if (config.samplesPerDomain < 1) throw ConfigError("samples per domain must be positive");
  if (config.embeddingDim < 1) throw ConfigError("embedding dimension must be positive");

  nn::Rng rng(config.seed);
  std::vector<Template> tmpl = templates();
  SynthCorpus corpus;
  WordSets sets;
  for (const DomainDef* d : chosen) {
    DomainData sd{d->name, buildKb(*d, rng), {}};
    DomainKb k{d, {}, {}, {}};
    for (const char* n : d->mainNames) k.mainNames.emplace_back(n);
    for (const char* n : d->sec1Names) k.sec1Names.emplace_back(n);
    for (const char* n : d->sec2Names) k.sec2Names.emplace_back(n);

    for (int i = 0; i < config.samplesPerDomain; ++i) {
      const Template& t = tmpl[rng.below(tmpl.size())];
      // Redraw literals and entities a few times to avoid empty answers.
      std::optional<Instance> inst;
      for (int attempt = 0; attempt < 8; ++attempt) {
        Instance cand = t(k, rng);
        lf::ExecOutcome out = lf::execute(lf::parseLF(cand.lf), sd.kb.kb);
        if (!out.ok()) {
          throw Error("generated form does not execute: " + cand.lf + " (" +
                      out.error().detail + ")");
        }
        bool empty = out.denotation().values.empty();
        if (!inst || !empty) inst = std::move(cand);
        if (!empty) break;
      }
      char idBuf[64];
      std::snprintf(idBuf, sizeof idBuf, "%s-%04d", d->name, i);
      sd.examples.push_back(
          Example{idBuf, d->name, std::move(inst->tokens), lf::parseLF(inst->lf)});
    }

    // Concepts: the words describing one constant share a vector.
    auto constantWords = [&](const std::string& id,
                             std::vector<std::string> lemmas) {
      lemmas.push_back(sd.kb.lexicon.phrase(id));
      sets.join(lemmas);
    };
    constantWords(d->mainType, {d->mainNoun.sg});
    constantWords(d->sec1Type, {d->sec1Noun.sg});
    constantWords(d->sec2Type, {d->sec2Noun.sg});
    constantWords(d->rel1, {d->rel1Noun.sg, d->countVerbLemma});
    constantWords(d->rel2, {d->rel2Noun});
    constantWords(d->relNum, {d->relNumNoun.pl});
    constantWords(d->entNum, {d->entNumNoun.pl});
    constantWords(d->relDate, {d->dateVerbLemma});
    constantWords(d->unary, {d->adjective});
    for (const auto& e : sd.kb.kb.entities()) {
      for (const auto& n : e.names) {
        for (const auto& w : splitWords(n)) sets.add(w);
      }
    }
    for (const auto& ex : sd.examples) {
      for (const auto& tok : ex.tokens) {
        for (const auto& w : splitWords(tok.lemma)) sets.add(w);
      }
    }
    corpus.corpus.domains.push_back(std::move(sd));
  }
  for (const auto& w : genericWords()) sets.add(w);

  // Concept vectors are drawn in sorted order of representative words, so
  // the table depends only on the vocabulary and the seed.
  nn::Rng vecRng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::map<std::string, Eigen::VectorXd> concepts;
  corpus.words = sets.words();
  for (const auto& w : corpus.words) {
    std::string root = sets.find(w);
    if (!concepts.contains(root)) {
      Eigen::VectorXd v(config.embeddingDim);
      for (int i = 0; i < v.size(); ++i) v[i] = vecRng.uniform(-1, 1);
      concepts.emplace(root, v);
    }
  }
  corpus.corpus.embeddings = embed::EmbeddingTable(config.embeddingDim);
  for (const auto& w : corpus.words) {
    Eigen::VectorXd v = concepts.at(sets.find(w));
    for (int i = 0; i < v.size(); ++i) {
      v[i] += vecRng.uniform(-config.embeddingNoise, config.embeddingNoise);
    }
    corpus.corpus.embeddings.add(w, v);
  }
  return corpus;
}

void writeSynth(const SynthCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& d : corpus.corpus.domains) {
    std::string kbPath = dir + "/" + d.name + ".kb.json";
    std::ofstream kbOut(kbPath, std::ios::binary);
    if (!kbOut) throw Error("cannot write " + kbPath);
    kbOut << kb::serializeKB(d.kb.kb, d.kb.lexicon) << '\n';
    writeExamples(dir + "/" + d.name + ".jsonl", d.examples);
  }
  embed::saveEmbeddings(corpus.corpus.embeddings, corpus.words, dir + "/embeddings.txt");
}

}  // namespace zsp::pipeline
