#include "zsp/lf.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support/random_kb.h"
#include "zsp/errors.h"

namespace zsp::lf {
namespace {

using testing::LfGenerator;
using testing::randomKb;

constexpr const char* kMeetings =
    "(and (type Meeting) (compare <= (countrev Attendee) (num 3)))";

TEST(ParseLF, CountComparative) {
  LogicalForm f = parseLF(kMeetings);
  const Node& root = f.root();
  ASSERT_EQ(root.kind, NodeKind::kAnd);
  EXPECT_EQ(root.args[0]->kind, NodeKind::kType);
  EXPECT_EQ(root.args[0]->id, "Meeting");
  const Node& cmp = *root.args[1];
  ASSERT_EQ(cmp.kind, NodeKind::kCompare);
  EXPECT_EQ(cmp.op, CompareOp::kLe);
  EXPECT_EQ(cmp.args[0]->kind, NodeKind::kCountRev);
  EXPECT_EQ(cmp.args[0]->id, "Attendee");
  EXPECT_EQ(cmp.args[1]->number, Rational(3));
  EXPECT_EQ(toLambdaDcs(f), "Type.Meeting ⊓ R[λx.count(Attendee.x)].(≤.3)");
}

TEST(ParseLF, SingleNode) {
  LogicalForm f = parseLF("(type Meeting)");
  EXPECT_EQ(f.root().kind, NodeKind::kType);
  EXPECT_EQ(printLF(f), "(type Meeting)");
}

TEST(ParseLF, UnbalancedReportsEndOfInput) {
  const std::string text = "(and (type Meeting)";
  try {
    parseLF(text);
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), text.size());
  }
}

TEST(ParseLF, RejectsMalformedInput) {
  for (const char* bad : {"", "type Meeting", "(type)", "(type A B)", "(join R)",
                          "(compare ~ (countrev R) (num 1))", "(num x)",
                          "(type A))", "(frobnicate A)", "(date 2018-13)"}) {
    EXPECT_THROW(parseLF(bad), SyntaxError) << bad;
  }
}

TEST(PrintLF, NormalizesWhitespace) {
  LogicalForm f = parseLF("  (and\n (join  R (entity E))\t(join S (type T)) ) ");
  EXPECT_EQ(printLF(f), "(and (join R (entity E)) (join S (type T)))");
}

TEST(PrintLF, RoundTripsLiterals) {
  for (const char* text : {"(num 3/2)", "(num -7)", "(date 2018)", "(date 2018-06)",
                           "(date 2018-06-01)", "(avg Price (type Recipe))",
                           "(argmin Rent (type Housing))",
                           "(compare >= Released (date 2015))",
                           "(reverse (join Author (entity Paper1)))",
                           "(or (entity A) (entity B))", "(unary Vegetarian)"}) {
    EXPECT_EQ(printLF(parseLF(text)), text);
  }
}

TEST(Linearize, SingleNode) {
  EXPECT_EQ(linearize(parseLF("(type Meeting)")),
            (std::vector<std::string>{"(", "type", "Meeting", ")"}));
}

TEST(Linearize, RolesMarkConstants) {
  auto tokens = linearizeWithRoles(parseLF(kMeetings));
  std::vector<std::string> constants;
  for (const auto& t : tokens) {
    if (t.role == TokenRole::kConstant) constants.push_back(t.text);
  }
  EXPECT_EQ(constants, (std::vector<std::string>{"Meeting", "Attendee"}));
}

TEST(Delinearize, RejectsDanglingBracket) {
  std::vector<std::string> tokens{"(", "type", "Meeting", ")", "("};
  EXPECT_THROW(delinearize(tokens), SyntaxError);
  std::vector<std::string> unclosed{"(", "type", "Meeting"};
  EXPECT_THROW(delinearize(unclosed), SyntaxError);
  std::vector<std::string> arity{"(", "and", "(", "type", "A", ")", ")"};
  EXPECT_THROW(delinearize(arity), SyntaxError);
}

TEST(Delinearize, SlotsNeedOption) {
  std::vector<std::string> tokens{"(", "num", "$NUM", ")"};
  EXPECT_THROW(delinearize(tokens), SyntaxError);
  LogicalForm f = delinearize(tokens, {.allowSlots = true});
  EXPECT_EQ(f.root().id, "$NUM");
}

// Random trees: text and token forms are both lossless.
TEST(LfProperty, RoundTripsOnRandomTrees) {
  testing::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    kb::KnowledgeBase kb = randomKb(rng);
    LfGenerator gen(kb, rng);
    LogicalForm f = gen(1 + i % 5);
    std::string text = printLF(f);
    LogicalForm reparsed = parseLF(text);
    ASSERT_TRUE(reparsed == f) << text;
    ASSERT_EQ(printLF(reparsed), text);
    ASSERT_TRUE(delinearize(linearize(f)) == f) << text;
  }
}

TEST(CheckOnce, RepeatedLiteralFails) {
  EXPECT_TRUE(checkOnce(parseLF(kMeetings)));
  EXPECT_FALSE(checkOnce(parseLF("(or (entity A) (entity A))")));
  EXPECT_FALSE(checkOnce(
      parseLF("(and (compare > Rent (num 3)) (compare < Size (num 3)))")));
  EXPECT_TRUE(checkOnce(parseLF("(or (entity A) (entity B))")));
  // Types and relations may repeat.
  EXPECT_TRUE(checkOnce(parseLF("(and (type A) (join R (type A)))")));
}

TEST(CheckOnce, InvariantUnderArgumentOrder) {
  testing::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    kb::KnowledgeBase kb = randomKb(rng);
    LfGenerator gen(kb, rng);
    NodePtr a = gen(3).rootPtr();
    NodePtr b = gen(3).rootPtr();
    EXPECT_EQ(checkOnce(LogicalForm(intersect(a, b))),
              checkOnce(LogicalForm(intersect(b, a))));
    EXPECT_EQ(checkOnce(LogicalForm(unite(a, b))), checkOnce(LogicalForm(unite(b, a))));
  }
}

TEST(Grammar, ShippedFileIsCurrent) {
  std::ifstream in(std::string(ZSP_SOURCE_DIR) + "/docs/lf_grammar.txt");
  ASSERT_TRUE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), tokenGrammar());
}

TEST(Grammar, StructureTokensCoverLinearizedKeywords) {
  const auto& structure = structureTokens();
  testing::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    kb::KnowledgeBase kb = randomKb(rng);
    LfGenerator gen(kb, rng);
    for (const auto& t : linearizeWithRoles(gen(4))) {
      if (t.role != TokenRole::kSyntax) continue;
      EXPECT_NE(std::find(structure.begin(), structure.end(), t.text), structure.end())
          << t.text;
    }
  }
}

}  // namespace
}  // namespace zsp::lf
