#include "zsp/lf.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "zsp/errors.h"

namespace zsp::lf {

namespace {

NodePtr make(Node node) { return std::make_shared<const Node>(std::move(node)); }

constexpr std::string_view kOpTokens[] = {"<=", ">=", "<", ">", "=", "!="};
constexpr std::string_view kOpSymbols[] = {"≤", "≥", "<", ">", "=", "≠"};
constexpr std::string_view kSuperlativeTokens[] = {"argmax", "argmin"};
constexpr std::string_view kAggregateTokens[] = {"sum", "avg", "max", "min"};

struct Tok {
  std::string text;
  std::size_t offset;
};

// Recursive-descent parser shared by the text and token front ends.
class Parser {
 public:
  Parser(std::vector<Tok> toks, std::size_t endOffset, DelinearizeOptions opts)
      : toks_(std::move(toks)), end_(endOffset), opts_(opts) {}

  LogicalForm parseTop() {
    NodePtr root = parseNode();
    if (pos_ != toks_.size()) fail("trailing tokens after logical form");
    return LogicalForm(std::move(root));
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(pos_ < toks_.size() ? toks_[pos_].offset : end_,
                      message);
  }

  const std::string& peek() const {
    if (pos_ >= toks_.size()) fail("unexpected end of input");
    return toks_[pos_].text;
  }

  void expect(std::string_view text) {
    if (peek() != text) fail("expected '" + std::string(text) + "'");
    ++pos_;
  }

  std::string atom(const char* what) {
    const std::string& t = peek();
    if (t == "(" || t == ")") fail(std::string("expected ") + what);
    ++pos_;
    return t;
  }

  NodePtr parseNode() {
    expect("(");
    std::string head = atom("keyword");
    NodePtr out;
    if (head == "entity") {
      out = entity(atom("entity id"));
    } else if (head == "type") {
      out = type(atom("type id"));
    } else if (head == "unary") {
      out = unary(atom("relation id"));
    } else if (head == "countrev") {
      out = countRev(atom("relation id"));
    } else if (head == "num") {
      std::string text = atom("number");
      if (opts_.allowSlots && text.starts_with('$')) {
        out = numberSlot(text);
      } else if (auto value = Rational::parse(text)) {
        out = number(*value);
      } else {
        --pos_;
        fail("expected number");
      }
    } else if (head == "date") {
      std::string text = atom("date");
      if (opts_.allowSlots && text.starts_with('$')) {
        out = dateSlot(text);
      } else if (auto value = Date::parse(text)) {
        out = date(*value);
      } else {
        --pos_;
        fail("expected date");
      }
    } else if (head == "join") {
      std::string rel = atom("relation id");
      out = join(std::move(rel), parseNode());
    } else if (head == "reverse") {
      out = reverse(parseNode());
    } else if (head == "and" || head == "or") {
      NodePtr a = parseNode();
      NodePtr b = parseNode();
      out = head == "and" ? intersect(std::move(a), std::move(b))
                          : unite(std::move(a), std::move(b));
    } else if (head == "compare") {
      std::string opText = atom("comparison operator");
      auto it = std::find(std::begin(kOpTokens), std::end(kOpTokens), opText);
      if (it == std::end(kOpTokens)) {
        --pos_;
        fail("expected comparison operator");
      }
      auto op = static_cast<CompareOp>(it - std::begin(kOpTokens));
      NodePtr base;
      if (peek() == "(") {
        std::size_t save = pos_;
        base = parseNode();
        if (base->kind != NodeKind::kCountRev) {
          pos_ = save;
          fail("comparison base must be (countrev ID) or a relation id");
        }
      } else {
        base = relation(atom("relation id"));
      }
      out = compare(op, std::move(base), parseNode());
    } else if (auto s = std::find(std::begin(kSuperlativeTokens),
                                  std::end(kSuperlativeTokens), head);
               s != std::end(kSuperlativeTokens)) {
      std::string rel = atom("relation id");
      out = superlative(
          static_cast<SuperlativeKind>(s - std::begin(kSuperlativeTokens)),
          std::move(rel), parseNode());
    } else if (auto a = std::find(std::begin(kAggregateTokens),
                                  std::end(kAggregateTokens), head);
               a != std::end(kAggregateTokens)) {
      std::string rel = atom("relation id");
      out = aggregate(
          static_cast<AggregateKind>(a - std::begin(kAggregateTokens)),
          std::move(rel), parseNode());
    } else {
      pos_ -= 1;
      fail("unknown keyword '" + head + "'");
    }
    expect(")");
    return out;
  }

  std::vector<Tok> toks_;
  std::size_t end_;
  DelinearizeOptions opts_;
  std::size_t pos_ = 0;
};

void emit(const Node& n, std::vector<LfToken>& out) {
  auto syn = [&](std::string_view t) {
    out.push_back({std::string(t), TokenRole::kSyntax});
  };
  auto constant = [&](const std::string& id) {
    out.push_back({id, TokenRole::kConstant});
  };
  if (n.kind == NodeKind::kRelation) {
    constant(n.id);
    return;
  }
  syn("(");
  switch (n.kind) {
    case NodeKind::kEntity:
      syn("entity");
      constant(n.id);
      break;
    case NodeKind::kNumber:
      syn("num");
      out.push_back({n.id.empty() ? n.number.str() : n.id, TokenRole::kNumber});
      break;
    case NodeKind::kDate:
      syn("date");
      out.push_back({n.id.empty() ? n.date.str() : n.id, TokenRole::kDate});
      break;
    case NodeKind::kType:
      syn("type");
      constant(n.id);
      break;
    case NodeKind::kUnary:
      syn("unary");
      constant(n.id);
      break;
    case NodeKind::kCountRev:
      syn("countrev");
      constant(n.id);
      break;
    case NodeKind::kJoin:
      syn("join");
      constant(n.id);
      emit(*n.args[0], out);
      break;
    case NodeKind::kReverse:
      syn("reverse");
      emit(*n.args[0], out);
      break;
    case NodeKind::kAnd:
    case NodeKind::kOr:
      syn(n.kind == NodeKind::kAnd ? "and" : "or");
      emit(*n.args[0], out);
      emit(*n.args[1], out);
      break;
    case NodeKind::kCompare:
      syn("compare");
      syn(opToken(n.op));
      emit(*n.args[0], out);
      emit(*n.args[1], out);
      break;
    case NodeKind::kSuperlative:
      syn(superlativeToken(n.superlative));
      constant(n.id);
      emit(*n.args[0], out);
      break;
    case NodeKind::kAggregate:
      syn(aggregateToken(n.aggregate));
      constant(n.id);
      emit(*n.args[0], out);
      break;
    case NodeKind::kRelation:
      break;
  }
  syn(")");
}

void collectLiterals(const Node& n, std::multiset<std::string>& seen) {
  switch (n.kind) {
    case NodeKind::kEntity:
      seen.insert("e:" + n.id);
      break;
    case NodeKind::kNumber:
      if (n.id.empty()) seen.insert("n:" + n.number.str());
      break;
    case NodeKind::kDate:
      if (n.id.empty()) seen.insert("d:" + n.date.str());
      break;
    default:
      break;
  }
  for (const auto& arg : n.args) collectLiterals(*arg, seen);
}

std::string renderDcs(const Node& n);

// Operands of a join/reverse are parenthesized when they are set operations.
std::string wrapOperand(const Node& n) {
  std::string inner = renderDcs(n);
  if (n.kind == NodeKind::kAnd || n.kind == NodeKind::kOr) {
    return "(" + inner + ")";
  }
  return inner;
}

std::string renderDcs(const Node& n) {
  switch (n.kind) {
    case NodeKind::kEntity:
    case NodeKind::kUnary:
    case NodeKind::kRelation:
      return n.id;
    case NodeKind::kNumber:
      return n.id.empty() ? n.number.str() : n.id;
    case NodeKind::kDate:
      return n.id.empty() ? n.date.display() : n.id;
    case NodeKind::kType:
      return "Type." + n.id;
    case NodeKind::kJoin:
      return n.id + "." + wrapOperand(*n.args[0]);
    case NodeKind::kReverse: {
      const Node& inner = *n.args[0];
      if (inner.kind == NodeKind::kJoin) {
        return "R[" + inner.id + "]." + wrapOperand(*inner.args[0]);
      }
      return "R[" + renderDcs(inner) + "]";
    }
    case NodeKind::kAnd:
    case NodeKind::kOr: {
      NodeKind other =
          n.kind == NodeKind::kAnd ? NodeKind::kOr : NodeKind::kAnd;
      auto side = [&](const Node& c) {
        std::string s = renderDcs(c);
        return c.kind == other ? "(" + s + ")" : s;
      };
      return side(*n.args[0]) + (n.kind == NodeKind::kAnd ? " ⊓ " : " ⊔ ") +
             side(*n.args[1]);
    }
    case NodeKind::kCountRev:
      return "λx.count(" + n.id + ".x)";
    case NodeKind::kCompare: {
      const Node& base = *n.args[0];
      std::string cmp = "(" +
                        std::string(kOpSymbols[static_cast<int>(n.op)]) + "." +
                        renderDcs(*n.args[1]) + ")";
      if (base.kind == NodeKind::kCountRev) {
        return "R[" + renderDcs(base) + "]." + cmp;
      }
      return renderDcs(base) + "." + cmp;
    }
    case NodeKind::kSuperlative:
      return std::string(superlativeToken(n.superlative)) + "(" +
             renderDcs(*n.args[0]) + ", " + n.id + ")";
    case NodeKind::kAggregate:
      return std::string(aggregateToken(n.aggregate)) + "(R[" + n.id + "]." +
             wrapOperand(*n.args[0]) + ")";
  }
  return {};
}

}  // namespace

bool operator==(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.id != b.id || a.number != b.number ||
      a.date != b.date || a.op != b.op || a.superlative != b.superlative ||
      a.aggregate != b.aggregate || a.args.size() != b.args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!(*a.args[i] == *b.args[i])) return false;
  }
  return true;
}

LogicalForm::LogicalForm(NodePtr root) : root_(std::move(root)) {
  if (!root_) throw Error("logical form without root");
}

NodePtr entity(std::string id) {
  return make({.kind = NodeKind::kEntity, .id = std::move(id)});
}
NodePtr number(Rational value) {
  return make({.kind = NodeKind::kNumber, .number = value});
}
NodePtr date(Date value) {
  return make({.kind = NodeKind::kDate, .date = value});
}
NodePtr numberSlot(std::string placeholder) {
  return make({.kind = NodeKind::kNumber, .id = std::move(placeholder)});
}
NodePtr dateSlot(std::string placeholder) {
  return make({.kind = NodeKind::kDate, .id = std::move(placeholder)});
}
NodePtr type(std::string id) {
  return make({.kind = NodeKind::kType, .id = std::move(id)});
}
NodePtr unary(std::string id) {
  return make({.kind = NodeKind::kUnary, .id = std::move(id)});
}
NodePtr relation(std::string id) {
  return make({.kind = NodeKind::kRelation, .id = std::move(id)});
}
NodePtr join(std::string rel, NodePtr arg) {
  return make(
      {.kind = NodeKind::kJoin, .id = std::move(rel), .args = {std::move(arg)}});
}
NodePtr reverse(NodePtr arg) {
  return make({.kind = NodeKind::kReverse, .args = {std::move(arg)}});
}
NodePtr intersect(NodePtr a, NodePtr b) {
  return make({.kind = NodeKind::kAnd, .args = {std::move(a), std::move(b)}});
}
NodePtr unite(NodePtr a, NodePtr b) {
  return make({.kind = NodeKind::kOr, .args = {std::move(a), std::move(b)}});
}
NodePtr countRev(std::string rel) {
  return make({.kind = NodeKind::kCountRev, .id = std::move(rel)});
}
NodePtr compare(CompareOp op, NodePtr base, NodePtr value) {
  return make({.kind = NodeKind::kCompare,
               .op = op,
               .args = {std::move(base), std::move(value)}});
}
NodePtr superlative(SuperlativeKind kind, std::string rel, NodePtr arg) {
  return make({.kind = NodeKind::kSuperlative,
               .id = std::move(rel),
               .superlative = kind,
               .args = {std::move(arg)}});
}
NodePtr aggregate(AggregateKind kind, std::string rel, NodePtr arg) {
  return make({.kind = NodeKind::kAggregate,
               .id = std::move(rel),
               .aggregate = kind,
               .args = {std::move(arg)}});
}

std::string_view opToken(CompareOp op) {
  return kOpTokens[static_cast<int>(op)];
}
std::string_view superlativeToken(SuperlativeKind kind) {
  return kSuperlativeTokens[static_cast<int>(kind)];
}
std::string_view aggregateToken(AggregateKind kind) {
  return kAggregateTokens[static_cast<int>(kind)];
}

LogicalForm parseLF(std::string_view text) {
  std::vector<Tok> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (ch == '(' || ch == ')') {
      toks.push_back({std::string(1, ch), i});
      ++i;
    } else {
      std::size_t start = i;
      while (i < text.size() && text[i] != '(' && text[i] != ')' &&
             !std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
      }
      toks.push_back({std::string(text.substr(start, i - start)), start});
    }
  }
  return Parser(std::move(toks), text.size(), {}).parseTop();
}

std::string printLF(const LogicalForm& lf) {
  std::string out;
  for (const auto& tok : linearizeWithRoles(lf)) {
    if (!out.empty() && out.back() != '(' && tok.text != ")") out += ' ';
    out += tok.text;
  }
  return out;
}

std::vector<std::string> linearize(const LogicalForm& lf) {
  std::vector<std::string> out;
  for (auto& tok : linearizeWithRoles(lf)) out.push_back(std::move(tok.text));
  return out;
}

std::vector<LfToken> linearizeWithRoles(const LogicalForm& lf) {
  std::vector<LfToken> out;
  emit(lf.root(), out);
  return out;
}

LogicalForm delinearize(std::span<const std::string> tokens,
                        DelinearizeOptions options) {
  std::vector<Tok> toks;
  toks.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) toks.push_back({tokens[i], i});
  return Parser(std::move(toks), tokens.size(), options).parseTop();
}

bool checkOnce(const LogicalForm& lf) {
  std::multiset<std::string> seen;
  collectLiterals(lf.root(), seen);
  for (auto it = seen.begin(); it != seen.end(); it = seen.upper_bound(*it)) {
    if (seen.count(*it) != 1) return false;
  }
  return true;
}

std::string toLambdaDcs(const LogicalForm& lf) { return renderDcs(lf.root()); }

const std::vector<std::string>& structureTokens() {
  static const std::vector<std::string> tokens = [] {
    std::vector<std::string> t = {"(",    ")",    "entity",  "num",
                                  "date", "type", "unary",   "countrev",
                                  "join", "reverse", "and",  "or",
                                  "compare"};
    for (auto op : kOpTokens) t.emplace_back(op);
    for (auto s : kSuperlativeTokens) t.emplace_back(s);
    for (auto a : kAggregateTokens) t.emplace_back(a);
    return t;
  }();
  return tokens;
}

std::string tokenGrammar() {
  std::ostringstream out;
  out << "# Linearized logical-form token grammar.\n"
         "# Generated by `zsp grammar`; do not edit by hand.\n"
         "#\n"
         "# A linearized logical form is the prefix traversal of the AST with\n"
         "# explicit bracket tokens. Terminals in quotes are fixed structure\n"
         "# tokens; ID, NUMBER and DATE are single atoms.\n\n"
         "node   ::= '(' 'entity' ID ')'\n"
         "         | '(' 'num' NUMBER ')'\n"
         "         | '(' 'date' DATE ')'\n"
         "         | '(' 'type' ID ')'\n"
         "         | '(' 'unary' ID ')'\n"
         "         | '(' 'countrev' ID ')'\n"
         "         | '(' 'join' ID node ')'\n"
         "         | '(' 'reverse' node ')'\n"
         "         | '(' 'and' node node ')'\n"
         "         | '(' 'or' node node ')'\n"
         "         | '(' 'compare' OP base node ')'\n"
         "         | '(' SUPERLATIVE ID node ')'\n"
         "         | '(' AGGREGATE ID node ')'\n"
         "base   ::= '(' 'countrev' ID ')' | ID\n"
         "OP     ::= ";
  for (std::size_t i = 0; i < std::size(kOpTokens); ++i) {
    out << (i ? " | " : "") << "'" << kOpTokens[i] << "'";
  }
  out << "\nSUPERLATIVE ::= 'argmax' | 'argmin'\n"
         "AGGREGATE   ::= 'sum' | 'avg' | 'max' | 'min'\n"
         "ID     ::= any atom other than '(' and ')'\n"
         "NUMBER ::= integer | integer '/' integer | decimal\n"
         "DATE   ::= YYYY | YYYY-MM | YYYY-MM-DD\n\n"
         "# Abstract logical forms replace constants and literals by slot\n"
         "# tokens: $ENT $ENT_TYPE $ENT_NUM $REL $REL_UNARY $REL_NUM\n"
         "# $REL_DATE in ID positions, $NUM in NUMBER and $DATE in DATE\n"
         "# positions.\n\n"
         "# Structure token alphabet:\n";
  for (const auto& t : structureTokens()) out << t << "\n";
  return out.str();
}

}  // namespace zsp::lf
