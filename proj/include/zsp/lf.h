#ifndef ZSP_LF_H_
#define ZSP_LF_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zsp/values.h"

// Logical forms: a lambda-DCS subset with set semantics.
//
// Canonical text is an s-expression; every node is a parenthesized form
// headed by a keyword:
//
//   (entity ID)  (num Q)  (date D)  (type ID)  (unary ID)  (countrev ID)
//   (join ID node)  (reverse node)  (and node node)  (or node node)
//   (compare OP base node)      base := (countrev ID) | ID
//   (argmax ID node)  (argmin ID node)
//   (sum ID node)  (avg ID node)  (max ID node)  (min ID node)
//
// The linearized form is the token sequence of the canonical text, with
// "(" and ")" as explicit tokens.
namespace zsp::lf {

enum class NodeKind : unsigned char {
  kEntity,
  kNumber,
  kDate,
  kType,
  kUnary,
  kRelation,  // Bare relation; only valid as the base of a comparison.
  kJoin,
  kReverse,
  kAnd,
  kOr,
  kCountRev,  // lambda x. count(REL.x)
  kCompare,
  kSuperlative,
  kAggregate,
};

enum class CompareOp : unsigned char { kLe, kGe, kLt, kGt, kEq, kNe };
enum class SuperlativeKind : unsigned char { kArgmax, kArgmin };
enum class AggregateKind : unsigned char { kSum, kAvg, kMax, kMin };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// Immutable AST node. Fields not used by `kind` keep their defaults so that
// structural equality can compare every field.
struct Node {
  NodeKind kind = NodeKind::kEntity;
  // Constant id for constant-bearing kinds. For kNumber/kDate a non-empty id
  // marks an abstract slot placeholder such as "$NUM".
  std::string id;
  Rational number;
  Date date;
  CompareOp op = CompareOp::kEq;
  SuperlativeKind superlative = SuperlativeKind::kArgmax;
  AggregateKind aggregate = AggregateKind::kSum;
  std::vector<NodePtr> args;
};

bool operator==(const Node& a, const Node& b);

class LogicalForm {
 public:
  explicit LogicalForm(NodePtr root);

  const Node& root() const { return *root_; }
  const NodePtr& rootPtr() const { return root_; }

  friend bool operator==(const LogicalForm& a, const LogicalForm& b) {
    return *a.root_ == *b.root_;
  }

 private:
  NodePtr root_;
};

// Builders.
NodePtr entity(std::string id);
NodePtr number(Rational value);
NodePtr date(Date value);
NodePtr numberSlot(std::string placeholder = "$NUM");
NodePtr dateSlot(std::string placeholder = "$DATE");
NodePtr type(std::string id);
NodePtr unary(std::string id);
NodePtr relation(std::string id);
NodePtr join(std::string relation, NodePtr arg);
NodePtr reverse(NodePtr arg);
NodePtr intersect(NodePtr a, NodePtr b);
NodePtr unite(NodePtr a, NodePtr b);
NodePtr countRev(std::string relation);
NodePtr compare(CompareOp op, NodePtr base, NodePtr value);
NodePtr superlative(SuperlativeKind kind, std::string relation, NodePtr arg);
NodePtr aggregate(AggregateKind kind, std::string relation, NodePtr arg);

std::string_view opToken(CompareOp op);
std::string_view superlativeToken(SuperlativeKind kind);
std::string_view aggregateToken(AggregateKind kind);

// Throws SyntaxError with a character offset.
LogicalForm parseLF(std::string_view text);
std::string printLF(const LogicalForm& lf);

enum class TokenRole : unsigned char { kSyntax, kConstant, kNumber, kDate };

struct LfToken {
  std::string text;
  TokenRole role;
};

std::vector<std::string> linearize(const LogicalForm& lf);
std::vector<LfToken> linearizeWithRoles(const LogicalForm& lf);

struct DelinearizeOptions {
  // Accept "$"-prefixed placeholders in number and date positions.
  bool allowSlots = false;
};

// Throws SyntaxError with a token index.
LogicalForm delinearize(std::span<const std::string> tokens,
                        DelinearizeOptions options = {});

// True iff no entity, number or date literal occurs more than once.
bool checkOnce(const LogicalForm& lf);

// Human-readable lambda-DCS rendering, e.g.
// "Type.Meeting ⊓ R[λx.count(Attendee.x)].(≤.3)".
std::string toLambdaDcs(const LogicalForm& lf);

// Fixed structure tokens (keywords, operators and brackets).
const std::vector<std::string>& structureTokens();

// Text of the linearized-token grammar shipped as docs/lf_grammar.txt.
std::string tokenGrammar();

}  // namespace zsp::lf

#endif  // ZSP_LF_H_
