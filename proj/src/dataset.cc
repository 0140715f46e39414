#include "zsp/dataset.h"

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "zsp/errors.h"

namespace zsp::pipeline {

using nlohmann::json;

namespace {

delex::AnnotatedToken parseToken(const json& j) {
  delex::AnnotatedToken t;
  t.surface = j.at("surface").get<std::string>();
  t.lemma = j.at("lemma").get<std::string>();
  std::string pos = j.at("pos").get<std::string>();
  auto p = delex::parsePos(pos);
  if (!p) throw Error("unknown part of speech '" + pos + "'");
  t.pos = *p;
  if (auto it = j.find("value"); it != j.end() && !it->is_null()) {
    std::string text = it->get<std::string>();
    if (t.pos == delex::Pos::kNum) {
      auto q = Rational::parse(text);
      if (!q) throw Error("bad number value '" + text + "'");
      t.value = *q;
    } else if (t.pos == delex::Pos::kDate) {
      auto d = Date::parse(text);
      if (!d) throw Error("bad date value '" + text + "'");
      t.value = *d;
    } else {
      throw Error("value on a " + pos + " token");
    }
  } else if (t.pos == delex::Pos::kNum || t.pos == delex::Pos::kDate) {
    throw Error(pos + " token '" + t.surface + "' without a value");
  }
  return t;
}

}  // namespace

std::vector<Example> parseExamples(std::string_view text,
                                   const std::string& source) {
  std::vector<Example> out;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      json j = json::parse(line);
      std::vector<delex::AnnotatedToken> tokens;
      for (const auto& t : j.at("tokens")) tokens.push_back(parseToken(t));
      out.push_back(Example{j.at("id").get<std::string>(),
                            j.at("domain").get<std::string>(),
                            std::move(tokens),
                            lf::parseLF(j.at("logical_form").get<std::string>())});
    } catch (const json::exception& e) {
      throw FormatError(source, lineNo, e.what());
    } catch (const Error& e) {
      throw FormatError(source, lineNo, e.what());
    }
  }
  return out;
}

std::vector<Example> loadExamples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseExamples(buf.str(), path);
}

std::string exampleJson(const Example& example) {
  json tokens = json::array();
  for (const auto& t : example.tokens) {
    json tok = {{"surface", t.surface},
                {"lemma", t.lemma},
                {"pos", std::string(delex::posName(t.pos))}};
    if (t.value) tok["value"] = kb::valueText(*t.value);
    tokens.push_back(std::move(tok));
  }
  json j = {{"id", example.id},
            {"domain", example.domain},
            {"tokens", std::move(tokens)},
            {"logical_form", lf::printLF(example.lf)}};
  return j.dump();
}

void writeExamples(const std::string& path,
                   const std::vector<Example>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  for (const auto& e : examples) out << exampleJson(e) << '\n';
  if (!out) throw Error("write failed for " + path);
}

std::map<std::string, std::vector<Example>> loadDataset(
    const std::vector<std::string>& paths) {
  std::map<std::string, std::vector<Example>> out;
  for (const auto& path : paths) {
    std::vector<Example> examples = loadExamples(path);
    if (examples.empty()) {
      std::cerr << "warning: " << path << " contains no examples\n";
    }
    for (auto& e : examples) out[e.domain].push_back(std::move(e));
  }
  return out;
}

std::vector<std::string> surfaces(const Example& example) {
  std::vector<std::string> out;
  for (const auto& t : example.tokens) out.push_back(t.surface);
  return out;
}

std::vector<std::string> lemmas(const Example& example) {
  std::vector<std::string> out;
  for (const auto& t : example.tokens) out.push_back(t.lemma);
  return out;
}

const DomainData& Corpus::domain(std::string_view name) const {
  for (const auto& d : domains) {
    if (d.name == name) return d;
  }
  throw ConfigError("unknown domain '" + std::string(name) + "'");
}

std::vector<std::string> Corpus::domainNames() const {
  std::vector<std::string> out;
  for (const auto& d : domains) out.push_back(d.name);
  return out;
}

Corpus loadCorpus(const std::string& dir,
                  const std::vector<std::string>& domains) {
  Corpus corpus;
  for (const auto& name : domains) {
    std::vector<Example> examples = loadExamples(dir + "/" + name + ".jsonl");
    for (const auto& e : examples) {
      if (e.domain != name) {
        throw FormatError(dir + "/" + name + ".jsonl", 0,
                          "example " + e.id + " belongs to domain " + e.domain);
      }
    }
    corpus.domains.push_back(
        {name, kb::loadKB(dir + "/" + name + ".kb.json"), std::move(examples)});
  }
  corpus.embeddings = embed::loadEmbeddings(dir + "/embeddings.txt");
  return corpus;
}

std::uint64_t stableHash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Split splitOf(std::string_view exampleId) {
  std::uint64_t h = stableHash(exampleId);
  if (h % 5 == 0) return Split::kTest;
  if ((h / 5) % 5 == 0) return Split::kDev;
  return Split::kTrain;
}

std::vector<const Example*> selectSplit(const DomainData& domain, Split split) {
  std::vector<const Example*> out;
  for (const auto& e : domain.examples) {
    if (splitOf(e.id) == split) out.push_back(&e);
  }
  return out;
}

}  // namespace zsp::pipeline
