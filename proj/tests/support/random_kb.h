// Random small KBs and logical forms, plus a naive set-enumeration evaluator
// used as an executor oracle.

#ifndef ZSP_TESTS_SUPPORT_RANDOM_KB_H_
#define ZSP_TESTS_SUPPORT_RANDOM_KB_H_

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "zsp/execute.h"
#include "zsp/kb.h"
#include "zsp/lf.h"

namespace zsp::testing {

using Rng = std::mt19937_64;

inline int uniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) {
  return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniformInt(rng, 0, static_cast<int>(v.size()) - 1))];
}

// Two entity types A and B, up to `maxEntities` entities and up to
// `maxRelations` relations of mixed signatures.
inline kb::KnowledgeBase randomKb(Rng& rng, int maxEntities = 12,
                                  int maxRelations = 4) {
  kb::KbContent c;
  c.domain = "random";
  c.entityTypes = {"A", "B"};
  int n = uniformInt(rng, 2, maxEntities);
  for (int i = 0; i < n; ++i) {
    std::string type = i == 0 ? "A" : i == 1 ? "B" : (coin(rng) ? "A" : "B");
    c.entities.push_back({"e" + std::to_string(i), type, {}});
  }
  int r = uniformInt(rng, 1, maxRelations);
  for (int i = 0; i < r; ++i) {
    kb::RelationInfo rel;
    rel.name = "r" + std::to_string(i);
    rel.subjectType = coin(rng) ? "A" : "B";
    switch (uniformInt(rng, 0, 3)) {
      case 0:
        rel.objectKind = kb::ObjectKind::kEntity;
        rel.objectType = coin(rng) ? "A" : "B";
        rel.category = kb::Category::kRel;
        break;
      case 1:
        rel.objectKind = kb::ObjectKind::kNumber;
        rel.category = kb::Category::kRelNum;
        break;
      case 2:
        rel.objectKind = kb::ObjectKind::kDate;
        rel.category = kb::Category::kRelDate;
        break;
      default:
        rel.unary = true;
        rel.objectKind = kb::ObjectKind::kNone;
        rel.category = kb::Category::kRelUnary;
        break;
    }
    c.relations.push_back(rel);
  }
  for (const auto& rel : c.relations) {
    for (const auto& e : c.entities) {
      if (e.type != rel.subjectType) continue;
      if (rel.unary) {
        if (coin(rng, 0.4)) c.triples.push_back({e.id, rel.name, std::nullopt});
        continue;
      }
      int k = uniformInt(rng, 0, 3);
      for (int j = 0; j < k; ++j) {
        kb::Value v;
        if (rel.objectKind == kb::ObjectKind::kEntity) {
          std::vector<std::string> objs;
          for (const auto& o : c.entities) {
            if (o.type == rel.objectType) objs.push_back(o.id);
          }
          v = pick(rng, objs);
        } else if (rel.objectKind == kb::ObjectKind::kNumber) {
          v = Rational(uniformInt(rng, 0, 6));
        } else {
          v = Date{2010 + uniformInt(rng, 0, 4), 0, 0};
        }
        c.triples.push_back({e.id, rel.name, v});
      }
    }
  }
  return kb::KnowledgeBase(std::move(c));
}

// Random logical form over the KB's constants, depth <= `depth`. Mostly
// well-typed, with deliberate type errors and unknown constants mixed in.
class LfGenerator {
 public:
  LfGenerator(const kb::KnowledgeBase& kb, Rng& rng) : kb_(kb), rng_(rng) {}

  lf::LogicalForm operator()(int depth) { return lf::LogicalForm(node(depth)); }

 private:
  std::string anyRelation() {
    if (coin(rng_, 0.03)) return "missing";
    return kb_.relations()[static_cast<std::size_t>(
                               uniformInt(rng_, 0, static_cast<int>(kb_.relations().size()) - 1))]
        .name;
  }

  lf::NodePtr literal() {
    if (coin(rng_)) return lf::number(Rational(uniformInt(rng_, 0, 6)));
    return lf::date(Date{2010 + uniformInt(rng_, 0, 4), 0, 0});
  }

  lf::NodePtr leaf() {
    switch (uniformInt(rng_, 0, 4)) {
      case 0:
        return lf::type(coin(rng_, 0.05) ? "C" : (coin(rng_) ? "A" : "B"));
      case 1: {
        if (coin(rng_, 0.05)) return lf::entity("nobody");
        return lf::entity(pick(rng_, entityIds()));
      }
      case 2:
        return lf::unary(anyRelation());
      default:
        return literal();
    }
  }

  std::vector<std::string> entityIds() const {
    std::vector<std::string> out;
    for (const auto& e : kb_.entities()) out.push_back(e.id);
    return out;
  }

  lf::NodePtr node(int depth) {
    if (depth <= 1 || coin(rng_, 0.25)) return leaf();
    switch (uniformInt(rng_, 0, 8)) {
      case 0:
        return lf::join(anyRelation(), node(depth - 1));
      case 1:
        return lf::reverse(lf::join(anyRelation(), node(depth - 2 > 0 ? depth - 2 : 1)));
      case 2:
        return lf::intersect(node(depth - 1), node(depth - 1));
      case 3:
        return lf::unite(node(depth - 1), node(depth - 1));
      case 4: {
        auto op = static_cast<lf::CompareOp>(uniformInt(rng_, 0, 5));
        return lf::compare(op, lf::countRev(anyRelation()), node(depth - 1));
      }
      case 5: {
        auto op = static_cast<lf::CompareOp>(uniformInt(rng_, 0, 5));
        return lf::compare(op, lf::relation(anyRelation()), node(depth - 1));
      }
      case 6: {
        auto kind = static_cast<lf::SuperlativeKind>(uniformInt(rng_, 0, 1));
        return lf::superlative(kind, anyRelation(), node(depth - 1));
      }
      case 7: {
        auto kind = static_cast<lf::AggregateKind>(uniformInt(rng_, 0, 3));
        return lf::aggregate(kind, anyRelation(), node(depth - 1));
      }
      default:
        return lf::join(anyRelation(), leaf());
    }
  }

  const kb::KnowledgeBase& kb_;
  Rng& rng_;
};

// Reference semantics written directly over the triple list: every set is
// computed by enumerating the candidate universe and testing membership.
class NaiveEvaluator {
 public:
  explicit NaiveEvaluator(const kb::KnowledgeBase& kb) : kb_(kb) {
    for (const auto& e : kb.entities()) entities_.push_back(e.id);
  }

  // nullopt when execution must fail.
  std::optional<lf::Denotation> run(const lf::LogicalForm& form) const {
    auto r = eval(form.root());
    if (!r) return std::nullopt;
    return lf::Denotation{r->kind, r->values};
  }

 private:
  struct Set {
    lf::DenotationKind kind;
    std::string type;  // Entity type of entity sets.
    std::set<kb::Value> values;
  };

  const kb::RelationInfo* rel(const std::string& id) const {
    for (const auto& r : kb_.relations()) {
      if (r.name == id) return &r;
    }
    return nullptr;
  }

  std::string typeOf(const std::string& entity) const {
    for (const auto& e : kb_.entities()) {
      if (e.id == entity) return e.type;
    }
    return {};
  }

  bool holds(const std::string& s, const std::string& r, const kb::Value& v) const {
    for (const auto& t : kb_.triples()) {
      if (t.subject == s && t.relation == r && t.object && *t.object == v) return true;
    }
    return false;
  }

  std::vector<kb::Value> valuesOf(const std::string& s, const std::string& r) const {
    std::set<kb::Value> out;
    for (const auto& t : kb_.triples()) {
      if (t.subject == s && t.relation == r && t.object) out.insert(*t.object);
    }
    return {out.begin(), out.end()};
  }

  static lf::DenotationKind kindOf(const kb::RelationInfo& r) {
    if (r.objectKind == kb::ObjectKind::kNumber) return lf::DenotationKind::kNumbers;
    if (r.objectKind == kb::ObjectKind::kDate) return lf::DenotationKind::kDates;
    return lf::DenotationKind::kEntities;
  }

  // All values that appear anywhere: entities and triple objects.
  std::set<kb::Value> universe() const {
    std::set<kb::Value> out(entities_.begin(), entities_.end());
    for (const auto& t : kb_.triples()) {
      if (t.object) out.insert(*t.object);
    }
    return out;
  }

  static bool cmp(const kb::Value& a, lf::CompareOp op, const kb::Value& b) {
    switch (op) {
      case lf::CompareOp::kLe: return !(b < a);
      case lf::CompareOp::kGe: return !(a < b);
      case lf::CompareOp::kLt: return a < b;
      case lf::CompareOp::kGt: return b < a;
      case lf::CompareOp::kEq: return a == b;
      case lf::CompareOp::kNe: return !(a == b);
    }
    return false;
  }

  std::set<kb::Value> subjectsOfType(const std::string& type) const {
    std::set<kb::Value> out;
    for (const auto& e : entities_) {
      if (typeOf(e) == type) out.insert(e);
    }
    return out;
  }

  std::optional<Set> eval(const lf::Node& n) const {
    using lf::NodeKind;
    using K = lf::DenotationKind;
    switch (n.kind) {
      case NodeKind::kEntity: {
        std::string t = typeOf(n.id);
        if (t.empty()) return std::nullopt;
        return Set{K::kEntities, t, {n.id}};
      }
      case NodeKind::kNumber:
        if (!n.id.empty()) return std::nullopt;
        return Set{K::kNumbers, "", {n.number}};
      case NodeKind::kDate:
        if (!n.id.empty()) return std::nullopt;
        return Set{K::kDates, "", {n.date}};
      case NodeKind::kType: {
        if (std::find(kb_.entityTypes().begin(), kb_.entityTypes().end(), n.id) ==
            kb_.entityTypes().end()) {
          return std::nullopt;
        }
        return Set{K::kEntities, n.id, subjectsOfType(n.id)};
      }
      case NodeKind::kUnary: {
        const auto* r = rel(n.id);
        if (!r || !r->unary) return std::nullopt;
        Set out{K::kEntities, r->subjectType, {}};
        for (const auto& t : kb_.triples()) {
          if (t.relation == n.id) out.values.insert(t.subject);
        }
        return out;
      }
      case NodeKind::kRelation:
      case NodeKind::kCountRev:
        return std::nullopt;
      case NodeKind::kJoin: {
        const auto* r = rel(n.id);
        auto arg = eval(*n.args[0]);
        if (!r || !arg || r->unary || arg->kind != kindOf(*r) ||
            (arg->kind == K::kEntities && arg->type != r->objectType)) {
          return std::nullopt;
        }
        Set out{K::kEntities, r->subjectType, {}};
        for (const auto& s : subjectsOfType(r->subjectType)) {
          for (const auto& v : arg->values) {
            if (holds(std::get<std::string>(s), n.id, v)) out.values.insert(s);
          }
        }
        return out;
      }
      case NodeKind::kReverse: {
        const lf::Node& inner = *n.args[0];
        if (inner.kind != NodeKind::kJoin) return std::nullopt;
        const auto* r = rel(inner.id);
        auto arg = eval(*inner.args[0]);
        if (!r || !arg || r->unary || arg->kind != K::kEntities ||
            arg->type != r->subjectType) {
          return std::nullopt;
        }
        Set out{kindOf(*r), r->objectType, {}};
        for (const auto& v : universe()) {
          for (const auto& s : arg->values) {
            if (holds(std::get<std::string>(s), inner.id, v)) out.values.insert(v);
          }
        }
        return out;
      }
      case NodeKind::kAnd:
      case NodeKind::kOr: {
        auto a = eval(*n.args[0]);
        auto b = eval(*n.args[1]);
        if (!a || !b || a->kind != b->kind || a->type != b->type) return std::nullopt;
        Set out{a->kind, a->type, {}};
        std::set<kb::Value> all = a->values;
        all.insert(b->values.begin(), b->values.end());
        for (const auto& v : all) {
          bool inA = a->values.count(v) > 0;
          bool inB = b->values.count(v) > 0;
          if (n.kind == NodeKind::kAnd ? (inA && inB) : (inA || inB)) {
            out.values.insert(v);
          }
        }
        return out;
      }
      case NodeKind::kCompare: {
        const lf::Node& base = *n.args[0];
        const auto* r = rel(base.id);
        auto value = eval(*n.args[1]);
        if (!r || !value || r->unary) return std::nullopt;
        Set out{K::kEntities, r->subjectType, {}};
        if (base.kind == NodeKind::kCountRev) {
          if (value->kind != K::kNumbers) return std::nullopt;
          for (const auto& s : subjectsOfType(r->subjectType)) {
            kb::Value count = Rational(static_cast<std::int64_t>(
                valuesOf(std::get<std::string>(s), base.id).size()));
            for (const auto& v : value->values) {
              if (cmp(count, n.op, v)) out.values.insert(s);
            }
          }
          return out;
        }
        if (r->objectKind == kb::ObjectKind::kEntity || value->kind != kindOf(*r)) {
          return std::nullopt;
        }
        for (const auto& s : subjectsOfType(r->subjectType)) {
          for (const auto& a : valuesOf(std::get<std::string>(s), base.id)) {
            for (const auto& v : value->values) {
              if (cmp(a, n.op, v)) out.values.insert(s);
            }
          }
        }
        return out;
      }
      case NodeKind::kSuperlative: {
        const auto* r = rel(n.id);
        auto arg = eval(*n.args[0]);
        if (!r || !arg || r->unary || r->objectKind == kb::ObjectKind::kEntity ||
            arg->kind != K::kEntities || arg->type != r->subjectType) {
          return std::nullopt;
        }
        // An element is kept iff no member of the base holds a better value.
        std::vector<std::pair<kb::Value, kb::Value>> pairs;
        for (const auto& s : arg->values) {
          for (const auto& v : valuesOf(std::get<std::string>(s), n.id)) {
            pairs.emplace_back(s, v);
          }
        }
        if (pairs.empty()) return std::nullopt;
        bool isMax = n.superlative == lf::SuperlativeKind::kArgmax;
        Set out{K::kEntities, arg->type, {}};
        for (const auto& [s, v] : pairs) {
          bool beaten = false;
          for (const auto& [s2, v2] : pairs) {
            if (isMax ? v < v2 : v2 < v) beaten = true;
          }
          if (!beaten) out.values.insert(s);
        }
        return out;
      }
      case NodeKind::kAggregate: {
        const auto* r = rel(n.id);
        auto arg = eval(*n.args[0]);
        if (!r || !arg || r->unary || r->objectKind != kb::ObjectKind::kNumber ||
            arg->kind != K::kEntities || arg->type != r->subjectType) {
          return std::nullopt;
        }
        std::vector<Rational> values;
        for (const auto& s : arg->values) {
          for (const auto& v : valuesOf(std::get<std::string>(s), n.id)) {
            values.push_back(std::get<Rational>(v));
          }
        }
        Set out{K::kNumbers, "", {}};
        Rational sum;
        for (const auto& q : values) sum = sum + q;
        if (n.aggregate == lf::AggregateKind::kSum) {
          out.values.insert(sum);
        } else if (!values.empty()) {
          std::sort(values.begin(), values.end());
          if (n.aggregate == lf::AggregateKind::kAvg) {
            out.values.insert(sum / Rational(static_cast<std::int64_t>(values.size())));
          } else {
            out.values.insert(n.aggregate == lf::AggregateKind::kMax ? values.back()
                                                                     : values.front());
          }
        }
        return out;
      }
    }
    return std::nullopt;
  }

  const kb::KnowledgeBase& kb_;
  std::vector<std::string> entities_;
};

}  // namespace zsp::testing

#endif  // ZSP_TESTS_SUPPORT_RANDOM_KB_H_
