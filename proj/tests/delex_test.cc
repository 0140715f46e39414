#include "zsp/delex.h"

#include <gtest/gtest.h>

#include "support/figure.h"
#include "zsp/errors.h"

namespace zsp::delex {
namespace {

using testing::numTok;
using testing::tok;

// Comparative adjectives occur in every domain, so they stay lexical.
AdjectiveStats sharedComparatives() {
  return AdjectiveStats({{"calendar", {"more"}}, {"recipes", {"more"}}});
}

TEST(DelexFigure, CalendarComparative) {
  auto ex = testing::calendarExample();
  AbstractUtterance u = delexUtterance(ex.tokens, ex.kb.kb, sharedComparatives(), "calendar");
  EXPECT_EQ(u.text(), "What NOUN have no more than NUM NOUN?");
  AbstractLogicalForm z = delexLogicalForm(ex.lf, ex.kb.kb);
  EXPECT_EQ(z.lambdaDcs(), "Type.$ENT_TYPE ⊓ R[λx.count($REL.x)].(≤.$NUM)");
  EXPECT_EQ(z.fillers, (std::vector<std::string>{"Meeting", "Attendee", "3"}));
}

TEST(DelexFigure, RecipesComparative) {
  auto ex = testing::recipesExample();
  AbstractUtterance u = delexUtterance(ex.tokens, ex.kb.kb, sharedComparatives(), "recipes");
  EXPECT_EQ(u.text(), "Which NOUN VERB no more than NUM NOUN?");
  EXPECT_EQ(u.values[6], kb::Value(Rational(2)));
  AbstractLogicalForm z = delexLogicalForm(ex.lf, ex.kb.kb);
  EXPECT_EQ(z.lambdaDcs(), "Type.$ENT_TYPE ⊓ R[λx.count($REL.x)].(≤.$NUM)");
}

TEST(DelexFigure, AbstractFormsCoincide) {
  auto a = testing::calendarExample();
  auto b = testing::recipesExample();
  EXPECT_EQ(delexLogicalForm(a.lf, a.kb.kb).tokens, delexLogicalForm(b.lf, b.kb.kb).tokens);
}

TEST(DelexUtterance, EntitiesWinLongestLeftmost) {
  auto ex = testing::calendarExample();
  std::vector<AnnotatedToken> tokens{
      tok("Who", "who"), tok("attends", "attend", Pos::kVerb), tok("weekly", "weekly", Pos::kAdj),
      tok("standup", "standup", Pos::kNoun), tok("with", "with"), tok("Bob", "bob", Pos::kNoun)};
  AbstractUtterance u = delexUtterance(tokens, ex.kb.kb, {}, "calendar");
  EXPECT_EQ(u.tokens, (std::vector<std::string>{"Who", "VERB", "ENT", "with", "ENT"}));
  EXPECT_EQ(u.sources[2], (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(u.values[2], kb::Value(std::string("WeeklyStandup")));
  EXPECT_EQ(u.words[2], "weekly standup");
  EXPECT_EQ(u.extracted.entities, (std::vector<std::string>{"WeeklyStandup", "Bob"}));
}

TEST(DelexUtterance, KeepsFunctionWordsAndWhitelistedNouns) {
  auto ex = testing::calendarExample();
  std::vector<AnnotatedToken> tokens{
      tok("what", "what"), tok("is", "be", Pos::kVerb), tok("the", "the"),
      tok("average", "average", Pos::kNoun), tok("number", "number", Pos::kNoun),
      tok("of", "of"), tok("meetings", "meeting", Pos::kNoun), tok("than", "than"),
      tok("more", "more", Pos::kAdj), tok("no", "no")};
  AbstractUtterance u = delexUtterance(tokens, ex.kb.kb, sharedComparatives(), "calendar");
  EXPECT_EQ(u.tokens, (std::vector<std::string>{"what", "is", "the", "average", "number",
                                                "of", "NOUN", "than", "more", "no"}));
}

TEST(DelexUtterance, DatesAndNumbers) {
  auto ex = testing::calendarExample();
  AnnotatedToken year{"2018", "2018", Pos::kDate, kb::Value(Date{2018, 0, 0})};
  std::vector<AnnotatedToken> tokens{tok("meetings", "meeting", Pos::kNoun),
                                     tok("after", "after"), year, numTok("5", 5)};
  AbstractUtterance u = delexUtterance(tokens, ex.kb.kb, {}, "calendar");
  EXPECT_EQ(u.tokens, (std::vector<std::string>{"NOUN", "after", "DATE", "NUM"}));
  EXPECT_EQ(u.extracted.dates, (std::vector<Date>{Date{2018, 0, 0}}));
  EXPECT_EQ(u.extracted.numbers, (std::vector<Rational>{Rational(5)}));
}

TEST(DelexUtterance, IsIdempotent) {
  auto ex = testing::recipesExample();
  AbstractUtterance once = delexUtterance(ex.tokens, ex.kb.kb, {}, "recipes");
  std::vector<AnnotatedToken> again;
  for (std::size_t i = 0; i < once.tokens.size(); ++i) {
    again.push_back(tok(once.tokens[i], once.tokens[i]));
  }
  AbstractUtterance twice = delexUtterance(again, ex.kb.kb, {}, "recipes");
  EXPECT_EQ(twice.tokens, once.tokens);
}

TEST(DelexUtterance, ProvenanceCoversEveryToken) {
  auto ex = testing::calendarExample();
  AbstractUtterance u = delexUtterance(ex.tokens, ex.kb.kb, {}, "calendar");
  std::vector<std::size_t> seen;
  for (const auto& s : u.sources) seen.insert(seen.end(), s.begin(), s.end());
  std::vector<std::size_t> all(ex.tokens.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  EXPECT_EQ(seen, all);
  for (const auto& [pos, indices] : u.provenance()) {
    EXPECT_TRUE(isAbstractWord(u.tokens[pos]));
    for (std::size_t i : indices) {
      if (u.tokens[pos] == "NOUN") EXPECT_EQ(ex.tokens[i].pos, Pos::kNoun);
      if (u.tokens[pos] == "NUM") EXPECT_EQ(ex.tokens[i].pos, Pos::kNum);
    }
  }
}

TEST(AdjectiveStats, UniqueAdjectivesAreAbstracted) {
  AdjectiveStats stats({{"calendar", {"important", "long"}},
                        {"housing", {"cheap", "long"}}});
  EXPECT_TRUE(stats.abstracts("calendar", "important"));
  EXPECT_FALSE(stats.abstracts("calendar", "long"));
  EXPECT_FALSE(stats.abstracts("calendar", "cheap"));
  // A domain outside the statistics abstracts only unseen adjectives.
  EXPECT_TRUE(stats.abstracts("recipes", "vegetarian"));
  EXPECT_FALSE(stats.abstracts("recipes", "cheap"));
  EXPECT_EQ(stats.uniqueTo("housing"), (std::set<std::string>{"cheap"}));

  auto ex = testing::calendarExample();
  std::vector<AnnotatedToken> tokens{tok("important", "important", Pos::kAdj),
                                     tok("long", "long", Pos::kAdj),
                                     tok("meetings", "meeting", Pos::kNoun)};
  AbstractUtterance u = delexUtterance(tokens, ex.kb.kb, stats, "calendar");
  EXPECT_EQ(u.tokens, (std::vector<std::string>{"ADJ", "long", "NOUN"}));
}

TEST(DelexLogicalForm, SlotsAndFillers) {
  auto ex = testing::calendarExample();
  AbstractLogicalForm z = delexLogicalForm(
      lf::parseLF("(and (type Meeting) (compare <= (countrev Attendee) (num 3)))"), ex.kb.kb);
  EXPECT_EQ(z.tokens, (std::vector<std::string>{"(", "and", "(", "type", "$ENT_TYPE", ")",
                                                "(", "compare", "<=", "(", "countrev", "$REL",
                                                ")", "(", "num", "$NUM", ")", ")", ")"}));
  EXPECT_EQ(z.slots, (std::vector<std::size_t>{4, 11, 15}));
  EXPECT_EQ(slotPositions(z.tokens), z.slots);
  EXPECT_EQ(z.category(0), kb::Category::kEntType);
  EXPECT_EQ(z.category(2), kb::Category::kNum);
  EXPECT_EQ(fillSlots(z.tokens, z.fillers),
            lf::linearize(lf::parseLF(
                "(and (type Meeting) (compare <= (countrev Attendee) (num 3)))")));
  EXPECT_THROW(delexLogicalForm(lf::parseLF("(type Castle)"), ex.kb.kb), UnknownConstant);
}

TEST(TagText, ProducesAnnotations) {
  auto tokens = tagText("What meetings have no more than 3 attendees?");
  ASSERT_EQ(tokens.size(), 9u);
  EXPECT_EQ(tokens[6].pos, Pos::kNum);
  EXPECT_EQ(tokens[6].value, kb::Value(Rational(3)));
  EXPECT_EQ(tokens[8].surface, "?");
}

}  // namespace
}  // namespace zsp::delex
