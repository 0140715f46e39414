#include "zsp/kb.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "zsp/errors.h"

namespace zsp::kb {

using nlohmann::json;

namespace {

constexpr std::string_view kCategoryTokens[] = {
    "$NUM", "$DATE", "$ENT", "$ENT_TYPE", "$ENT_NUM",
    "$REL", "$REL_UNARY", "$REL_NUM", "$REL_DATE"};

const std::vector<Value> kNoValues;
const std::vector<std::string> kNoEntities;

Category derivedCategory(const RelationInfo& rel) {
  if (rel.unary) return Category::kRelUnary;
  switch (rel.objectKind) {
    case ObjectKind::kNumber:
      return Category::kRelNum;
    case ObjectKind::kDate:
      return Category::kRelDate;
    default:
      return Category::kRel;
  }
}

bool categoryFits(const RelationInfo& rel, Category category) {
  switch (category) {
    case Category::kRelUnary:
      return rel.unary;
    case Category::kRel:
      return !rel.unary && rel.objectKind == ObjectKind::kEntity;
    case Category::kRelNum:
    case Category::kEntNum:
      return !rel.unary && rel.objectKind == ObjectKind::kNumber;
    case Category::kRelDate:
      return !rel.unary && rel.objectKind == ObjectKind::kDate;
    default:
      return false;
  }
}

bool validPhrase(const std::string& phrase) {
  if (phrase.empty()) return false;
  int words = 0;
  bool inWord = false;
  for (char ch : phrase) {
    if (std::isupper(static_cast<unsigned char>(ch))) return false;
    if (ch == ' ') {
      inWord = false;
    } else if (!inWord) {
      inWord = true;
      ++words;
    }
  }
  return words >= 1 && words <= 4;
}

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace

std::string_view categoryToken(Category category) {
  return kCategoryTokens[static_cast<int>(category)];
}

std::optional<Category> parseCategory(std::string_view token) {
  for (std::size_t i = 0; i < std::size(kCategoryTokens); ++i) {
    if (kCategoryTokens[i] == token) return static_cast<Category>(i);
  }
  return std::nullopt;
}

bool isSlotToken(std::string_view token) {
  return parseCategory(token).has_value();
}

std::string valueText(const Value& value) {
  if (auto* s = std::get_if<std::string>(&value)) return *s;
  if (auto* r = std::get_if<Rational>(&value)) return r->str();
  return std::get<Date>(value).str();
}

KnowledgeBase::KnowledgeBase(KbContent content)
    : domain_(std::move(content.domain)),
      entityTypes_(std::move(content.entityTypes)),
      relations_(std::move(content.relations)),
      entities_(std::move(content.entities)),
      triples_(std::move(content.triples)) {
  auto fail = [&](const std::string& msg) {
    throw FormatError("kb " + domain_, 0, msg);
  };
  std::sort(entityTypes_.begin(), entityTypes_.end());
  std::sort(relations_.begin(), relations_.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(entities_.begin(), entities_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  std::set<std::string> ids;
  auto claim = [&](const std::string& id, const char* what) {
    if (id.empty()) fail(std::string("empty ") + what + " id");
    if (id.find_first_of("() \t\n") != std::string::npos || id[0] == '$') {
      fail(std::string("invalid ") + what + " id '" + id + "'");
    }
    if (!ids.insert(id).second) fail("duplicate constant id '" + id + "'");
  };
  for (const auto& t : entityTypes_) claim(t, "entity type");
  for (auto& rel : relations_) {
    claim(rel.name, "relation");
    if (!hasEntityType(rel.subjectType)) {
      fail("relation " + rel.name + " has unknown subject type '" +
           rel.subjectType + "'");
    }
    if (rel.unary) {
      rel.objectKind = ObjectKind::kNone;
      rel.objectType.clear();
    } else if (rel.objectKind == ObjectKind::kNone) {
      fail("binary relation " + rel.name + " without object kind");
    } else if (rel.objectKind == ObjectKind::kEntity &&
               !hasEntityType(rel.objectType)) {
      fail("relation " + rel.name + " has unknown object type '" +
           rel.objectType + "'");
    }
    if (!categoryFits(rel, rel.category)) {
      fail("category " + std::string(categoryToken(rel.category)) +
           " does not fit the signature of relation " + rel.name);
    }
  }
  for (auto& e : entities_) {
    claim(e.id, "entity");
    if (!hasEntityType(e.type)) {
      fail("entity " + e.id + " has unknown type '" + e.type + "'");
    }
    for (auto& name : e.names) name = lower(name);
    byType_[e.type].push_back(e.id);
  }
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const Triple& t = triples_[i];
    std::string where = "triple " + std::to_string(i) + ": ";
    const EntityInfo* subject = findEntity(t.subject);
    if (!subject) fail(where + "unknown subject '" + t.subject + "'");
    const RelationInfo* rel = findRelation(t.relation);
    if (!rel) fail(where + "undeclared relation '" + t.relation + "'");
    if (subject->type != rel->subjectType) {
      fail(where + "subject type does not match relation " + rel->name);
    }
    if (rel->unary) {
      if (t.object) fail(where + "unary relation with an object");
      objects_[{t.subject, t.relation}];
      continue;
    }
    if (!t.object) fail(where + "binary relation without an object");
    switch (rel->objectKind) {
      case ObjectKind::kEntity: {
        auto* id = std::get_if<std::string>(&*t.object);
        const EntityInfo* obj = id ? findEntity(*id) : nullptr;
        if (!obj || obj->type != rel->objectType) {
          fail(where + "object is not an entity of type " + rel->objectType);
        }
        break;
      }
      case ObjectKind::kNumber:
        if (!std::holds_alternative<Rational>(*t.object)) {
          fail(where + "object is not a number");
        }
        break;
      case ObjectKind::kDate:
        if (!std::holds_alternative<Date>(*t.object)) {
          fail(where + "object is not a date");
        }
        break;
      case ObjectKind::kNone:
        break;
    }
    auto& objs = objects_[{t.subject, t.relation}];
    if (std::find(objs.begin(), objs.end(), *t.object) == objs.end()) {
      objs.push_back(*t.object);
    }
  }
}

bool KnowledgeBase::hasEntityType(std::string_view id) const {
  return std::binary_search(entityTypes_.begin(), entityTypes_.end(), id);
}

const EntityInfo* KnowledgeBase::findEntity(std::string_view id) const {
  auto it = std::lower_bound(
      entities_.begin(), entities_.end(), id,
      [](const EntityInfo& e, std::string_view key) { return e.id < key; });
  return it != entities_.end() && it->id == id ? &*it : nullptr;
}

const RelationInfo* KnowledgeBase::findRelation(std::string_view id) const {
  auto it = std::lower_bound(
      relations_.begin(), relations_.end(), id,
      [](const RelationInfo& r, std::string_view key) { return r.name < key; });
  return it != relations_.end() && it->name == id ? &*it : nullptr;
}

const std::vector<std::string>& KnowledgeBase::entitiesOfType(
    std::string_view type) const {
  auto it = byType_.find(type);
  return it == byType_.end() ? kNoEntities : it->second;
}

const std::vector<Value>& KnowledgeBase::objects(
    std::string_view subject, std::string_view relation) const {
  auto it = objects_.find({std::string(subject), std::string(relation)});
  return it == objects_.end() ? kNoValues : it->second;
}

bool KnowledgeBase::hasProperty(std::string_view subject,
                                std::string_view unaryRel) const {
  return objects_.count({std::string(subject), std::string(unaryRel)}) > 0;
}

Category KnowledgeBase::categoryOf(std::string_view id) const {
  if (hasEntityType(id)) return Category::kEntType;
  if (findEntity(id)) return Category::kEnt;
  if (const RelationInfo* rel = findRelation(id)) return rel->category;
  throw UnknownConstant(std::string(id));
}

bool KnowledgeBase::hasConstant(std::string_view id) const {
  return hasEntityType(id) || findEntity(id) || findRelation(id);
}

void Lexicon::set(std::string id, std::string phrase) {
  phrases_[std::move(id)] = std::move(phrase);
}

const std::string* Lexicon::find(std::string_view id) const {
  auto it = phrases_.find(id);
  return it == phrases_.end() ? nullptr : &it->second;
}

const std::string& Lexicon::phrase(std::string_view id) const {
  if (const std::string* p = find(id)) return *p;
  throw UnknownConstant(std::string(id));
}

LoadedKb parseKB(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw FormatError(source, line, e.what());
  }
  auto fail = [&](const std::string& msg) {
    throw FormatError(source, 0, msg);
  };
  try {
    KbContent content;
    content.domain = doc.at("domain").get<std::string>();
    const json& schema = doc.at("schema");
    content.entityTypes =
        schema.at("entity_types").get<std::vector<std::string>>();
    for (const json& r : schema.at("relations")) {
      RelationInfo rel;
      rel.name = r.at("name").get<std::string>();
      rel.subjectType = r.at("subject_type").get<std::string>();
      std::string arity = r.value("arity", "binary");
      if (arity != "binary" && arity != "unary") {
        fail("relation " + rel.name + ": arity must be binary or unary");
      }
      rel.unary = arity == "unary";
      std::string kind = r.value("object_kind", rel.unary ? "none" : "");
      if (kind == "entity") {
        rel.objectKind = ObjectKind::kEntity;
        rel.objectType = r.at("object_type").get<std::string>();
      } else if (kind == "number") {
        rel.objectKind = ObjectKind::kNumber;
      } else if (kind == "date") {
        rel.objectKind = ObjectKind::kDate;
      } else if (kind == "none" && rel.unary) {
        rel.objectKind = ObjectKind::kNone;
      } else {
        fail("relation " + rel.name + ": bad object_kind '" + kind + "'");
      }
      rel.category = derivedCategory(rel);
      if (r.contains("category")) {
        auto cat = parseCategory(r.at("category").get<std::string>());
        if (!cat) fail("relation " + rel.name + ": unknown category");
        rel.category = *cat;
      }
      content.relations.push_back(std::move(rel));
    }
    std::map<std::string, ObjectKind> kinds;
    for (const auto& rel : content.relations) kinds[rel.name] = rel.objectKind;
    for (const json& e : doc.at("entities")) {
      EntityInfo info;
      info.id = e.at("id").get<std::string>();
      info.type = e.at("type").get<std::string>();
      info.names = e.value("names", std::vector<std::string>{});
      content.entities.push_back(std::move(info));
    }
    std::size_t index = 0;
    for (const json& t : doc.value("triples", json::array())) {
      std::string where = "triples[" + std::to_string(index++) + "]";
      if (!t.is_array() || t.size() < 2 || t.size() > 3) {
        fail(where + ": expected [subject, relation] or [subject, relation, "
                     "object]");
      }
      Triple triple{t[0].get<std::string>(), t[1].get<std::string>(), {}};
      auto kind = kinds.find(triple.relation);
      if (kind == kinds.end()) {
        fail(where + ": undeclared relation '" + triple.relation + "'");
      }
      if (t.size() == 3 && !t[2].is_null()) {
        const json& obj = t[2];
        switch (kind->second) {
          case ObjectKind::kEntity:
            triple.object = obj.get<std::string>();
            break;
          case ObjectKind::kNumber: {
            std::optional<Rational> q;
            if (obj.is_number_integer()) {
              q = Rational(obj.get<std::int64_t>());
            } else if (obj.is_string()) {
              q = Rational::parse(obj.get<std::string>());
            } else if (obj.is_number()) {
              q = Rational::parse(obj.dump());
            }
            if (!q) fail(where + ": bad number");
            triple.object = *q;
            break;
          }
          case ObjectKind::kDate: {
            auto d = Date::parse(obj.get<std::string>());
            if (!d) fail(where + ": bad date");
            triple.object = *d;
            break;
          }
          case ObjectKind::kNone:
            fail(where + ": unary relation with an object");
        }
      }
      content.triples.push_back(std::move(triple));
    }

    LoadedKb out;
    json lex = doc.value("lexicon", json::object());
    for (auto it = lex.begin(); it != lex.end(); ++it) {
      out.lexicon.set(it.key(), it.value().get<std::string>());
    }
    // Entities without an explicit entry are described by their first name.
    for (const auto& e : content.entities) {
      if (!out.lexicon.find(e.id) && !e.names.empty()) {
        out.lexicon.set(e.id, lower(e.names.front()));
      }
    }
    out.kb = KnowledgeBase(std::move(content));
    auto requirePhrase = [&](const std::string& id) {
      const std::string* phrase = out.lexicon.find(id);
      if (!phrase) fail("lexicon has no entry for '" + id + "'");
      if (!validPhrase(*phrase)) {
        fail("lexicon entry for '" + id +
             "' must be 1-4 lowercase words, got '" + *phrase + "'");
      }
    };
    for (const auto& t : out.kb.entityTypes()) requirePhrase(t);
    for (const auto& r : out.kb.relations()) requirePhrase(r.name);
    for (const auto& e : out.kb.entities()) requirePhrase(e.id);
    return out;
  } catch (const json::exception& e) {
    throw FormatError(source, 0, e.what());
  } catch (const FormatError& e) {
    // Re-label errors raised by KnowledgeBase with the file name.
    if (std::string_view(e.what()).starts_with(source)) throw;
    throw FormatError(source, 0, e.what());
  }
}

LoadedKb loadKB(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseKB(buf.str(), path);
}

std::string serializeKB(const KnowledgeBase& kb, const Lexicon& lexicon) {
  json doc;
  doc["domain"] = kb.domain();
  json relations = json::array();
  for (const auto& r : kb.relations()) {
    json rel = {{"name", r.name}, {"subject_type", r.subjectType},
                {"arity", r.unary ? "unary" : "binary"}};
    if (!r.unary) {
      static const char* kKinds[] = {"entity", "number", "date", "none"};
      rel["object_kind"] = kKinds[static_cast<int>(r.objectKind)];
      if (r.objectKind == ObjectKind::kEntity) rel["object_type"] = r.objectType;
    }
    if (r.category != derivedCategory(r)) {
      rel["category"] = std::string(categoryToken(r.category));
    }
    relations.push_back(std::move(rel));
  }
  doc["schema"] = {{"entity_types", kb.entityTypes()},
                   {"relations", std::move(relations)}};
  json entities = json::array();
  for (const auto& e : kb.entities()) {
    entities.push_back({{"id", e.id}, {"type", e.type}, {"names", e.names}});
  }
  doc["entities"] = std::move(entities);
  json triples = json::array();
  for (const auto& t : kb.triples()) {
    json row = {t.subject, t.relation};
    if (t.object) {
      if (auto* q = std::get_if<Rational>(&*t.object); q && q->den() == 1) {
        row.push_back(q->num());
      } else {
        row.push_back(valueText(*t.object));
      }
    }
    triples.push_back(std::move(row));
  }
  doc["triples"] = std::move(triples);
  json lex = json::object();
  for (const auto& [id, phrase] : lexicon.entries()) lex[id] = phrase;
  doc["lexicon"] = std::move(lex);
  return doc.dump(1) + "\n";
}

ConstantInfo constantInfo(const KnowledgeBase& kb, const Lexicon& lexicon,
                          std::string_view id) {
  Category category = kb.categoryOf(id);
  return {category, lexicon.phrase(id)};
}

std::vector<std::string> candidates(const KnowledgeBase& kb, Category category,
                                    const ExtractedValues& extracted) {
  std::vector<std::string> out;
  switch (category) {
    case Category::kNum: {
      std::vector<Rational> nums = extracted.numbers;
      std::sort(nums.begin(), nums.end());
      nums.erase(std::unique(nums.begin(), nums.end()), nums.end());
      for (const auto& q : nums) out.push_back(q.str());
      break;
    }
    case Category::kDate: {
      std::vector<Date> dates = extracted.dates;
      std::sort(dates.begin(), dates.end());
      dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
      for (const auto& d : dates) out.push_back(d.str());
      break;
    }
    case Category::kEnt:
      for (const auto& e : kb.entities()) out.push_back(e.id);
      break;
    case Category::kEntType:
      out = kb.entityTypes();
      break;
    default:
      for (const auto& r : kb.relations()) {
        if (r.category == category) out.push_back(r.name);
      }
      break;
  }
  if (out.empty()) throw EmptyCandidates(0, std::string(categoryToken(category)));
  return out;
}

}  // namespace zsp::kb
