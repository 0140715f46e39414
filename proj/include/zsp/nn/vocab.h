#ifndef ZSP_NN_VOCAB_H_
#define ZSP_NN_VOCAB_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace zsp::nn {

// Token <-> id map. Id 0 is always "<unk>".
class Vocab {
 public:
  static constexpr int kUnk = 0;
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocab();
  explicit Vocab(const std::vector<std::string>& tokens);

  int add(const std::string& token);
  // kUnk when absent.
  int id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(int id) const { return tokens_[id]; }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace zsp::nn

#endif  // ZSP_NN_VOCAB_H_
