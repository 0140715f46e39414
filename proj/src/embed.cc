#include "zsp/embed.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>

#include "zsp/errors.h"

namespace zsp::embed {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

bool isInteger(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

}  // namespace

void EmbeddingTable::add(std::string word, Eigen::VectorXd vector) {
  if (dim_ == 0) dim_ = static_cast<int>(vector.size());
  if (vector.size() != dim_) {
    throw DimMismatch("embedding for '" + word + "' has dimension " +
                      std::to_string(vector.size()) + ", expected " +
                      std::to_string(dim_));
  }
  vectors_[lower(word)] = std::move(vector);
}

const Eigen::VectorXd* EmbeddingTable::find(std::string_view word) const {
  auto it = vectors_.find(lower(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

std::optional<Eigen::VectorXd> EmbeddingTable::phrase(
    std::string_view text) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim_);
  int n = 0;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) {
    if (const Eigen::VectorXd* v = find(word)) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

EmbeddingTable loadEmbeddings(const std::string& path,
                              const std::set<std::string>* vocabFilter) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  EmbeddingTable table;
  int dim = 0;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream fields(line);
    std::vector<std::string> parts;
    std::string part;
    while (fields >> part) parts.push_back(std::move(part));
    if (parts.empty()) continue;
    if (lineNo == 1 && parts.size() == 2 && isInteger(parts[0]) &&
        isInteger(parts[1])) {
      continue;
    }
    int rowDim = static_cast<int>(parts.size()) - 1;
    if (dim == 0) {
      if (rowDim < 1) throw FormatError(path, lineNo, "row without values");
      dim = rowDim;
      table = EmbeddingTable(dim);
    } else if (rowDim != dim) {
      throw FormatError(path, lineNo,
                        "row has " + std::to_string(rowDim) +
                            " values, expected " + std::to_string(dim));
    }
    if (vocabFilter && !vocabFilter->count(lower(parts[0]))) continue;
    Eigen::VectorXd v(dim);
    for (int k = 0; k < dim; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(parts[k + 1].c_str(), &end);
      if (*end != '\0') {
        throw FormatError(path, lineNo, "bad number '" + parts[k + 1] + "'");
      }
    }
    table.add(parts[0], std::move(v));
  }
  return table;
}

void saveEmbeddings(const EmbeddingTable& table,
                    const std::vector<std::string>& order,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  char buf[32];
  for (const auto& word : order) {
    const Eigen::VectorXd* v = table.find(word);
    if (!v) continue;
    out << word;
    for (double x : *v) {
      std::snprintf(buf, sizeof(buf), " %.5f", x);
      out << buf;
    }
    out << '\n';
  }
}

double scaledCosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  double nu = u.norm();
  double nv = v.norm();
  if (nu == 0 || nv == 0) return 0.5;
  double cos = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
  return (1 + cos) / 2;
}

Eigen::VectorXd phiConstant(std::string_view id, const kb::Lexicon& lexicon,
                            const EmbeddingTable& table) {
  const std::string& phrase = lexicon.phrase(id);
  auto v = table.phrase(phrase);
  if (!v) throw AllOov(phrase);
  return *v;
}

double simPhi(std::string_view word, std::string_view constant,
              const kb::Lexicon& lexicon, const EmbeddingTable& table) {
  auto w = table.phrase(word);
  const std::string* phrase = lexicon.find(constant);
  if (!w || !phrase) return 0.5;
  auto c = table.phrase(*phrase);
  if (!c) return 0.5;
  return scaledCosine(*w, *c);
}

}  // namespace zsp::embed
