#ifndef ZSP_EXECUTE_H_
#define ZSP_EXECUTE_H_

#include <set>
#include <string>
#include <variant>

#include "zsp/kb.h"
#include "zsp/lf.h"

namespace zsp::lf {

enum class DenotationKind : unsigned char { kEntities, kNumbers, kDates };

struct Denotation {
  DenotationKind kind = DenotationKind::kEntities;
  std::set<kb::Value> values;

  friend bool operator==(const Denotation&, const Denotation&) = default;
};

bool denotationEqual(const Denotation& a, const Denotation& b);
std::string denotationText(const Denotation& d);

enum class ExecErrorKind : unsigned char {
  kUnknownConstant,
  kTypeMismatch,
  kEmptySuperlativeBase,
  kMalformed,
};

std::string_view execErrorName(ExecErrorKind kind);

struct ExecError {
  ExecErrorKind reason;
  std::string detail;
};

class ExecOutcome {
 public:
  ExecOutcome(Denotation d) : value_(std::move(d)) {}  // NOLINT
  ExecOutcome(ExecError e) : value_(std::move(e)) {}   // NOLINT

  bool ok() const { return std::holds_alternative<Denotation>(value_); }
  const Denotation& denotation() const { return std::get<Denotation>(value_); }
  const ExecError& error() const { return std::get<ExecError>(value_); }

 private:
  std::variant<Denotation, ExecError> value_;
};

// Evaluates `lf` against `kb` with set semantics:
//
//   (type T)           all entities of type T
//   (entity E)         {E}
//   (unary R)          subjects s with (s, R)
//   (join R S)         subjects s with some (s, R, v), v in S
//   (reverse (join R S))  objects v with some (s, R, v), s in S
//   (and A B) (or A B) intersection / union of same-kind sets
//   (compare OP (countrev R) N)  subjects of R whose number of distinct
//                      R-objects is OP some n in N
//   (compare OP R V)   subjects with some R-value v such that v OP some V
//   (argmax R S)       members of S holding the largest R-value
//   (sum R S) ...      aggregate over the R-values of S's members
//
// Entity sets are typed; mixing entity types, or sets of different kinds,
// is a type mismatch.
ExecOutcome execute(const LogicalForm& lf, const kb::KnowledgeBase& kb);

}  // namespace zsp::lf

#endif  // ZSP_EXECUTE_H_
