#ifndef ZSP_KB_H_
#define ZSP_KB_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zsp/values.h"

namespace zsp::kb {

// Abstract categories of logical-form constants and literals.
enum class Category : unsigned char {
  kNum,
  kDate,
  kEnt,
  kEntType,
  kEntNum,
  kRel,
  kRelUnary,
  kRelNum,
  kRelDate,
};

// "$NUM", "$ENT_TYPE", ...
std::string_view categoryToken(Category category);
std::optional<Category> parseCategory(std::string_view token);
bool isSlotToken(std::string_view token);

enum class ObjectKind : unsigned char { kEntity, kNumber, kDate, kNone };

struct RelationInfo {
  std::string name;
  std::string subjectType;
  ObjectKind objectKind = ObjectKind::kEntity;
  // Entity type of the object for entity-valued relations, else empty.
  std::string objectType;
  bool unary = false;
  Category category = Category::kRel;
};

struct EntityInfo {
  std::string id;
  std::string type;
  // Lowercase surface forms used for string matching in utterances.
  std::vector<std::string> names;
};

// Entity id, number or date.
using Value = std::variant<std::string, Rational, Date>;

std::string valueText(const Value& value);

struct Triple {
  std::string subject;
  std::string relation;
  std::optional<Value> object;  // Absent for unary relations.
};

// Declarative content of a KB; validated by KnowledgeBase's constructor.
struct KbContent {
  std::string domain;
  std::vector<std::string> entityTypes;
  std::vector<RelationInfo> relations;
  std::vector<EntityInfo> entities;
  std::vector<Triple> triples;
};

class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  // Throws FormatError on invariant violations.
  explicit KnowledgeBase(KbContent content);

  const std::string& domain() const { return domain_; }
  // All collections are sorted by id.
  const std::vector<std::string>& entityTypes() const { return entityTypes_; }
  const std::vector<RelationInfo>& relations() const { return relations_; }
  const std::vector<EntityInfo>& entities() const { return entities_; }
  const std::vector<Triple>& triples() const { return triples_; }

  bool hasEntityType(std::string_view id) const;
  const EntityInfo* findEntity(std::string_view id) const;
  const RelationInfo* findRelation(std::string_view id) const;

  // Sorted entity ids of the given type.
  const std::vector<std::string>& entitiesOfType(std::string_view type) const;
  // Objects of (subject, relation) in file order; empty when none.
  const std::vector<Value>& objects(std::string_view subject,
                                    std::string_view relation) const;
  bool hasProperty(std::string_view subject, std::string_view unaryRel) const;

  // Category of a schema constant; throws UnknownConstant.
  Category categoryOf(std::string_view id) const;
  bool hasConstant(std::string_view id) const;

 private:
  std::string domain_;
  std::vector<std::string> entityTypes_;
  std::vector<RelationInfo> relations_;
  std::vector<EntityInfo> entities_;
  std::vector<Triple> triples_;
  std::map<std::string, std::vector<std::string>, std::less<>> byType_;
  std::map<std::pair<std::string, std::string>, std::vector<Value>> objects_;
};

// Constant id -> short lowercase description phrase.
class Lexicon {
 public:
  void set(std::string id, std::string phrase);
  const std::string* find(std::string_view id) const;
  // Throws UnknownConstant.
  const std::string& phrase(std::string_view id) const;
  const std::map<std::string, std::string, std::less<>>& entries() const {
    return phrases_;
  }

 private:
  std::map<std::string, std::string, std::less<>> phrases_;
};

struct LoadedKb {
  KnowledgeBase kb;
  Lexicon lexicon;
};

// Reads a KB file (JSON, see docs/formats.md). Throws FormatError.
LoadedKb loadKB(const std::string& path);
LoadedKb parseKB(std::string_view text, const std::string& source = "<kb>");
std::string serializeKB(const KnowledgeBase& kb, const Lexicon& lexicon);

struct ConstantInfo {
  Category category;
  std::string phrase;
};

// Throws UnknownConstant.
ConstantInfo constantInfo(const KnowledgeBase& kb, const Lexicon& lexicon,
                          std::string_view id);

// Numbers, dates and entity ids found in an utterance.
struct ExtractedValues {
  std::vector<Rational> numbers;
  std::vector<Date> dates;
  std::vector<std::string> entities;
};

// Candidate fillers for a slot of the given logical-form category, as
// canonical tokens (constant ids or literal text). Constants are ordered by
// id, numbers and dates by value, duplicates removed. Throws
// EmptyCandidates when nothing qualifies.
std::vector<std::string> candidates(const KnowledgeBase& kb, Category category,
                                    const ExtractedValues& extracted);

}  // namespace zsp::kb

#endif  // ZSP_KB_H_
