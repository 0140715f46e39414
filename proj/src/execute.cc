#include "zsp/execute.h"

#include <algorithm>

namespace zsp::lf {

namespace {

using kb::KnowledgeBase;
using kb::ObjectKind;
using kb::RelationInfo;
using kb::Value;

struct Failure {
  ExecErrorKind reason;
  std::string detail;
};

// Intermediate result: a denotation plus the entity type of entity sets.
struct TypedSet {
  DenotationKind kind;
  std::string entityType;
  std::set<Value> values;
};

DenotationKind kindOf(ObjectKind k) {
  switch (k) {
    case ObjectKind::kNumber:
      return DenotationKind::kNumbers;
    case ObjectKind::kDate:
      return DenotationKind::kDates;
    default:
      return DenotationKind::kEntities;
  }
}

bool compareValues(const Value& a, CompareOp op, const Value& b) {
  auto cmp = a <=> b;
  switch (op) {
    case CompareOp::kLe:
      return cmp <= 0;
    case CompareOp::kGe:
      return cmp >= 0;
    case CompareOp::kLt:
      return cmp < 0;
    case CompareOp::kGt:
      return cmp > 0;
    case CompareOp::kEq:
      return cmp == 0;
    case CompareOp::kNe:
      return cmp != 0;
  }
  return false;
}

class Executor {
 public:
  explicit Executor(const KnowledgeBase& kb) : kb_(kb) {}

  TypedSet eval(const Node& n) {
    switch (n.kind) {
      case NodeKind::kEntity: {
        const kb::EntityInfo* e = kb_.findEntity(n.id);
        if (!e) unknown(n.id);
        return {DenotationKind::kEntities, e->type, {Value(n.id)}};
      }
      case NodeKind::kNumber:
        if (!n.id.empty()) malformed("unfilled slot " + n.id);
        return {DenotationKind::kNumbers, {}, {Value(n.number)}};
      case NodeKind::kDate:
        if (!n.id.empty()) malformed("unfilled slot " + n.id);
        return {DenotationKind::kDates, {}, {Value(n.date)}};
      case NodeKind::kType: {
        if (!kb_.hasEntityType(n.id)) unknown(n.id);
        TypedSet out{DenotationKind::kEntities, n.id, {}};
        for (const auto& id : kb_.entitiesOfType(n.id)) out.values.insert(id);
        return out;
      }
      case NodeKind::kUnary: {
        const RelationInfo& rel = relation(n.id);
        if (!rel.unary) mismatch(n.id + " is not a unary relation");
        TypedSet out{DenotationKind::kEntities, rel.subjectType, {}};
        for (const auto& id : kb_.entitiesOfType(rel.subjectType)) {
          if (kb_.hasProperty(id, n.id)) out.values.insert(id);
        }
        return out;
      }
      case NodeKind::kRelation:
      case NodeKind::kCountRev:
        relation(n.id);
        malformed("relation " + n.id + " outside a comparison");
      case NodeKind::kJoin: {
        const RelationInfo& rel = relation(n.id);
        TypedSet arg = eval(*n.args[0]);
        requireBinary(rel);
        if (arg.kind != kindOf(rel.objectKind) ||
            (arg.kind == DenotationKind::kEntities &&
             arg.entityType != rel.objectType)) {
          mismatch("argument of join " + rel.name + " has the wrong type");
        }
        TypedSet out{DenotationKind::kEntities, rel.subjectType, {}};
        for (const auto& id : kb_.entitiesOfType(rel.subjectType)) {
          for (const Value& v : kb_.objects(id, rel.name)) {
            if (arg.values.count(v)) {
              out.values.insert(id);
              break;
            }
          }
        }
        return out;
      }
      case NodeKind::kReverse: {
        const Node& inner = *n.args[0];
        if (inner.kind != NodeKind::kJoin) {
          malformed("reverse applies to a join only");
        }
        const RelationInfo& rel = relation(inner.id);
        TypedSet arg = eval(*inner.args[0]);
        requireBinary(rel);
        requireSubjects(arg, rel);
        TypedSet out{kindOf(rel.objectKind), rel.objectType, {}};
        for (const Value& s : arg.values) {
          for (const Value& v : kb_.objects(std::get<std::string>(s), rel.name)) {
            out.values.insert(v);
          }
        }
        return out;
      }
      case NodeKind::kAnd:
      case NodeKind::kOr: {
        TypedSet a = eval(*n.args[0]);
        TypedSet b = eval(*n.args[1]);
        if (a.kind != b.kind || a.entityType != b.entityType) {
          mismatch("set operation over different types");
        }
        TypedSet out{a.kind, a.entityType, {}};
        if (n.kind == NodeKind::kAnd) {
          std::set_intersection(a.values.begin(), a.values.end(),
                                b.values.begin(), b.values.end(),
                                std::inserter(out.values, out.values.end()));
        } else {
          std::set_union(a.values.begin(), a.values.end(), b.values.begin(),
                         b.values.end(),
                         std::inserter(out.values, out.values.end()));
        }
        return out;
      }
      case NodeKind::kCompare:
        return evalCompare(n);
      case NodeKind::kSuperlative:
        return evalSuperlative(n);
      case NodeKind::kAggregate:
        return evalAggregate(n);
    }
    malformed("unknown node kind");
  }

 private:
  [[noreturn]] void fail(ExecErrorKind reason, std::string detail) {
    throw Failure{reason, std::move(detail)};
  }
  [[noreturn]] void unknown(const std::string& id) {
    fail(ExecErrorKind::kUnknownConstant, id);
  }
  [[noreturn]] void mismatch(std::string detail) {
    fail(ExecErrorKind::kTypeMismatch, std::move(detail));
  }
  [[noreturn]] void malformed(std::string detail) {
    fail(ExecErrorKind::kMalformed, std::move(detail));
  }

  const RelationInfo& relation(const std::string& id) {
    const RelationInfo* rel = kb_.findRelation(id);
    if (!rel) unknown(id);
    return *rel;
  }

  void requireBinary(const RelationInfo& rel) {
    if (rel.unary) mismatch(rel.name + " is a unary relation");
  }

  void requireSubjects(const TypedSet& s, const RelationInfo& rel) {
    if (s.kind != DenotationKind::kEntities || s.entityType != rel.subjectType) {
      mismatch("expected entities of type " + rel.subjectType + " for " +
               rel.name);
    }
  }

  void requireValued(const RelationInfo& rel) {
    if (rel.unary || rel.objectKind == ObjectKind::kEntity) {
      mismatch(rel.name + " is not number- or date-valued");
    }
  }

  TypedSet evalCompare(const Node& n) {
    const Node& base = *n.args[0];
    const RelationInfo& rel = relation(base.id);
    TypedSet value = eval(*n.args[1]);
    requireBinary(rel);
    TypedSet out{DenotationKind::kEntities, rel.subjectType, {}};
    if (base.kind == NodeKind::kCountRev) {
      if (value.kind != DenotationKind::kNumbers) {
        mismatch("count compared with a non-number");
      }
      for (const auto& id : kb_.entitiesOfType(rel.subjectType)) {
        Value count(Rational(
            static_cast<std::int64_t>(kb_.objects(id, rel.name).size())));
        for (const Value& v : value.values) {
          if (compareValues(count, n.op, v)) {
            out.values.insert(id);
            break;
          }
        }
      }
      return out;
    }
    requireValued(rel);
    if (value.kind != kindOf(rel.objectKind)) {
      mismatch("comparison of " + rel.name + " with the wrong value kind");
    }
    for (const auto& id : kb_.entitiesOfType(rel.subjectType)) {
      bool hit = false;
      for (const Value& a : kb_.objects(id, rel.name)) {
        for (const Value& b : value.values) {
          if (compareValues(a, n.op, b)) {
            hit = true;
            break;
          }
        }
        if (hit) break;
      }
      if (hit) out.values.insert(id);
    }
    return out;
  }

  TypedSet evalSuperlative(const Node& n) {
    const RelationInfo& rel = relation(n.id);
    TypedSet arg = eval(*n.args[0]);
    requireValued(rel);
    requireSubjects(arg, rel);
    bool isMax = n.superlative == SuperlativeKind::kArgmax;
    std::optional<Value> best;
    for (const Value& s : arg.values) {
      for (const Value& v : kb_.objects(std::get<std::string>(s), rel.name)) {
        if (!best || (isMax ? v > *best : v < *best)) best = v;
      }
    }
    if (!best) {
      fail(ExecErrorKind::kEmptySuperlativeBase,
           "no " + rel.name + " values in the base set");
    }
    TypedSet out{DenotationKind::kEntities, arg.entityType, {}};
    for (const Value& s : arg.values) {
      const auto& objs = kb_.objects(std::get<std::string>(s), rel.name);
      if (std::find(objs.begin(), objs.end(), *best) != objs.end()) {
        out.values.insert(s);
      }
    }
    return out;
  }

  TypedSet evalAggregate(const Node& n) {
    const RelationInfo& rel = relation(n.id);
    TypedSet arg = eval(*n.args[0]);
    if (rel.unary || rel.objectKind != ObjectKind::kNumber) {
      mismatch(rel.name + " is not number-valued");
    }
    requireSubjects(arg, rel);
    std::vector<Rational> values;
    for (const Value& s : arg.values) {
      for (const Value& v : kb_.objects(std::get<std::string>(s), rel.name)) {
        values.push_back(std::get<Rational>(v));
      }
    }
    TypedSet out{DenotationKind::kNumbers, {}, {}};
    Rational sum;
    for (const auto& q : values) sum = sum + q;
    switch (n.aggregate) {
      case AggregateKind::kSum:
        out.values.insert(sum);
        break;
      case AggregateKind::kAvg:
        if (!values.empty()) {
          out.values.insert(
              sum / Rational(static_cast<std::int64_t>(values.size())));
        }
        break;
      case AggregateKind::kMax:
        if (!values.empty()) {
          out.values.insert(*std::max_element(values.begin(), values.end()));
        }
        break;
      case AggregateKind::kMin:
        if (!values.empty()) {
          out.values.insert(*std::min_element(values.begin(), values.end()));
        }
        break;
    }
    return out;
  }

  const KnowledgeBase& kb_;
};

}  // namespace

bool denotationEqual(const Denotation& a, const Denotation& b) {
  return a == b;
}

std::string denotationText(const Denotation& d) {
  static const char* kNames[] = {"entities", "numbers", "dates"};
  std::string out = kNames[static_cast<int>(d.kind)];
  out += " {";
  bool first = true;
  for (const Value& v : d.values) {
    if (!first) out += ", ";
    first = false;
    out += kb::valueText(v);
  }
  return out + "}";
}

std::string_view execErrorName(ExecErrorKind kind) {
  static constexpr std::string_view kNames[] = {
      "unknown-constant", "type-mismatch", "empty-superlative-base",
      "malformed"};
  return kNames[static_cast<int>(kind)];
}

ExecOutcome execute(const LogicalForm& lf, const kb::KnowledgeBase& kb) {
  try {
    TypedSet result = Executor(kb).eval(lf.root());
    return Denotation{result.kind, std::move(result.values)};
  } catch (Failure& f) {
    return ExecError{f.reason, std::move(f.detail)};
  }
}

}  // namespace zsp::lf
