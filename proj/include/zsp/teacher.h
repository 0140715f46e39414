#ifndef ZSP_TEACHER_H_
#define ZSP_TEACHER_H_

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace zsp::align {

// A lexicalized training pair: utterance words and logical-form tokens.
struct LexicalPair {
  std::vector<std::string> words;
  std::vector<std::string> lfTokens;
};

struct TeacherConfig {
  int iterations = 5;
  double p0 = 0.08;     // Probability of aligning to NULL.
  double tension = 4.0;  // Diagonal preference, fixed.
};

// For LF position i (0-based) of n, the alignment link to utterance position
// j of m, or -1 for NULL.
using Links = std::vector<int>;

// IBM Model 2 with the diagonal-favoring distortion of fast_align: every LF
// token is generated by one utterance word or by NULL, with
//   P(j | i) = p0                                   for NULL
//            = (1 - p0) exp(-tension |i/n - j/m|) / Z_i  otherwise,
// and a lexical table t(lf token | word) estimated by EM.
class Teacher {
 public:
  Teacher() = default;
  explicit Teacher(TeacherConfig config) : config_(config) {}

  // Runs config.iterations EM iterations from a uniform table. Returns the
  // corpus log-likelihood before the first update followed by the value
  // after each iteration.
  std::vector<double> train(const std::vector<LexicalPair>& corpus);

  double logLikelihood(const std::vector<LexicalPair>& corpus) const;

  // Per LF token, the most probable source (NULL included). Ties go to NULL,
  // then to the lowest utterance index.
  Links viterbi(const LexicalPair& pair) const;

  // t(lfToken | word); the NULL word is "<null>".
  double translation(const std::string& lfToken, const std::string& word) const;

  const TeacherConfig& config() const { return config_; }

  static constexpr const char* kNull = "<null>";

 private:
  int wordId(const std::string& w) const;
  int tokenId(const std::string& t) const;
  double distortion(int i, int n, int j, int m) const;
  double t(int token, int word) const;

  TeacherConfig config_;
  std::unordered_map<std::string, int> words_;
  std::unordered_map<std::string, int> tokens_;
  std::unordered_map<std::uint64_t, double> table_;
  double uniform_ = 0;
  bool trained_ = false;
};

// Pharaoh-style "i-j" pairs (LF index - utterance index), space-separated.
std::string formatLinks(const Links& links);
// Throws FormatError on malformed pairs.
Links parseLinks(const std::string& text, std::size_t lfLength);

}  // namespace zsp::align

#endif  // ZSP_TEACHER_H_
