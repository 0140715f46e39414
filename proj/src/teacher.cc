#include "zsp/teacher.h"

#include <cmath>
#include <sstream>

#include "zsp/errors.h"

namespace zsp::align {

namespace {

std::uint64_t key(int token, int word) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(token)) << 32) |
         static_cast<std::uint32_t>(word);
}

}  // namespace

int Teacher::wordId(const std::string& w) const {
  auto it = words_.find(w);
  return it == words_.end() ? -1 : it->second;
}

int Teacher::tokenId(const std::string& t) const {
  auto it = tokens_.find(t);
  return it == tokens_.end() ? -1 : it->second;
}

double Teacher::distortion(int i, int n, int j, int m) const {
  auto h = [&](int jj) {
    return std::exp(-config_.tension *
                    std::abs((i + 1.0) / n - (jj + 1.0) / m));
  };
  double z = 0;
  for (int jj = 0; jj < m; ++jj) z += h(jj);
  return (1 - config_.p0) * h(j) / z;
}

double Teacher::t(int token, int word) const {
  if (token < 0 || word < 0) return 0;
  if (!trained_) return uniform_;
  auto it = table_.find(key(token, word));
  return it == table_.end() ? 0.0 : it->second;
}

double Teacher::translation(const std::string& lfToken,
                            const std::string& word) const {
  return t(tokenId(lfToken), wordId(word));
}

std::vector<double> Teacher::train(const std::vector<LexicalPair>& corpus) {
  words_.clear();
  tokens_.clear();
  table_.clear();
  words_.emplace(kNull, 0);
  for (const auto& pair : corpus) {
    for (const auto& w : pair.words) words_.emplace(w, static_cast<int>(words_.size()));
    for (const auto& t : pair.lfTokens) {
      tokens_.emplace(t, static_cast<int>(tokens_.size()));
    }
  }
  uniform_ = tokens_.empty() ? 0 : 1.0 / static_cast<double>(tokens_.size());
  trained_ = false;

  std::vector<double> ll{logLikelihood(corpus)};
  for (int iter = 0; iter < config_.iterations; ++iter) {
    std::unordered_map<std::uint64_t, double> counts;
    std::vector<double> totals(words_.size(), 0.0);
    std::vector<double> post;
    for (const auto& pair : corpus) {
      const int m = static_cast<int>(pair.words.size());
      const int n = static_cast<int>(pair.lfTokens.size());
      std::vector<int> w(m);
      for (int j = 0; j < m; ++j) w[j] = wordId(pair.words[j]);
      for (int i = 0; i < n; ++i) {
        int tok = tokenId(pair.lfTokens[i]);
        post.assign(m + 1, 0.0);
        post[0] = config_.p0 * t(tok, 0);
        double z = post[0];
        for (int j = 0; j < m; ++j) {
          post[j + 1] = distortion(i, n, j, m) * t(tok, w[j]);
          z += post[j + 1];
        }
        if (z <= 0) continue;
        counts[key(tok, 0)] += post[0] / z;
        totals[0] += post[0] / z;
        for (int j = 0; j < m; ++j) {
          double c = post[j + 1] / z;
          counts[key(tok, w[j])] += c;
          totals[w[j]] += c;
        }
      }
    }
    table_.clear();
    for (const auto& [k, c] : counts) {
      int word = static_cast<int>(k & 0xffffffffu);
      table_[k] = c / totals[word];
    }
    trained_ = true;
    ll.push_back(logLikelihood(corpus));
  }
  return ll;
}

double Teacher::logLikelihood(const std::vector<LexicalPair>& corpus) const {
  double ll = 0;
  for (const auto& pair : corpus) {
    const int m = static_cast<int>(pair.words.size());
    const int n = static_cast<int>(pair.lfTokens.size());
    for (int i = 0; i < n; ++i) {
      int tok = tokenId(pair.lfTokens[i]);
      double p = config_.p0 * t(tok, 0);
      for (int j = 0; j < m; ++j) {
        p += distortion(i, n, j, m) * t(tok, wordId(pair.words[j]));
      }
      ll += std::log(p);
    }
  }
  return ll;
}

Links Teacher::viterbi(const LexicalPair& pair) const {
  const int m = static_cast<int>(pair.words.size());
  const int n = static_cast<int>(pair.lfTokens.size());
  Links links(n, -1);
  for (int i = 0; i < n; ++i) {
    int tok = tokenId(pair.lfTokens[i]);
    double best = config_.p0 * t(tok, 0);
    for (int j = 0; j < m; ++j) {
      double p = distortion(i, n, j, m) * t(tok, wordId(pair.words[j]));
      if (p > best) {
        best = p;
        links[i] = j;
      }
    }
  }
  return links;
}

std::string formatLinks(const Links& links) {
  std::string out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i] < 0) continue;
    if (!out.empty()) out += ' ';
    out += std::to_string(i) + "-" + std::to_string(links[i]);
  }
  return out;
}

Links parseLinks(const std::string& text, std::size_t lfLength) {
  Links links(lfLength, -1);
  std::istringstream in(text);
  std::string pair;
  while (in >> pair) {
    auto dash = pair.find('-');
    std::size_t i = 0, j = 0;
    try {
      if (dash == std::string::npos) throw std::invalid_argument(pair);
      i = std::stoul(pair.substr(0, dash));
      j = std::stoul(pair.substr(dash + 1));
    } catch (const std::exception&) {
      throw FormatError("alignment", 0, "bad alignment pair '" + pair + "'");
    }
    if (i >= lfLength) {
      throw FormatError("alignment", 0, "alignment index out of range");
    }
    if (links[i] >= 0) {
      throw FormatError("alignment", 0,
                        "logical-form position aligned twice: " + pair);
    }
    links[i] = static_cast<int>(j);
  }
  return links;
}

}  // namespace zsp::align
