#ifndef ZSP_EMBED_H_
#define ZSP_EMBED_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "zsp/kb.h"

namespace zsp::embed {

// Static pre-trained word vectors. Lookups are lowercase; a word without a
// vector is out of vocabulary (OOV) and every similarity involving it is the
// neutral 0.5.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  // Throws DimMismatch.
  void add(std::string word, Eigen::VectorXd vector);
  const Eigen::VectorXd* find(std::string_view word) const;

  // Mean vector of the phrase's in-vocabulary words; nullopt if none.
  std::optional<Eigen::VectorXd> phrase(std::string_view text) const;

 private:
  int dim_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

// Reads `word v1 .. vf` lines. A first line of exactly two integers is taken
// as a "count dim" header. Throws FormatError on ragged rows.
EmbeddingTable loadEmbeddings(const std::string& path,
                              const std::set<std::string>* vocabFilter = nullptr);

void saveEmbeddings(const EmbeddingTable& table,
                    const std::vector<std::string>& order,
                    const std::string& path);

// (1 + cos(u, v)) / 2; 0.5 when either vector is zero.
double scaledCosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Average embedding of the constant's lexicon phrase. Throws AllOov.
Eigen::VectorXd phiConstant(std::string_view id, const kb::Lexicon& lexicon,
                            const EmbeddingTable& table);

// Similarity of a (possibly multi-word) utterance word and a KB constant,
// 0.5 when either side has no vector.
double simPhi(std::string_view word, std::string_view constant,
              const kb::Lexicon& lexicon, const EmbeddingTable& table);

}  // namespace zsp::embed

#endif  // ZSP_EMBED_H_
