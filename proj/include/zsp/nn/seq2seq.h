#ifndef ZSP_NN_SEQ2SEQ_H_
#define ZSP_NN_SEQ2SEQ_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "zsp/nn/attention.h"
#include "zsp/nn/lstm.h"
#include "zsp/nn/params.h"
#include "zsp/nn/vocab.h"

namespace zsp::nn {

// What copying input position k produces.
enum class CopyMode : unsigned char {
  kNone,      // Copying disabled.
  kIdentity,  // The input token itself.
  kTable,     // copyTable[input token]; tokens not in the table are not
              // copyable.
};

struct Seq2SeqConfig {
  int embed = 100;
  int hidden = 300;  // Per encoder direction.
  int decoderHidden = 300;
  double dropout = 0.0;
  double initScale = 0.08;
  CopyMode copy = CopyMode::kIdentity;
  std::map<std::string, std::string> copyTable;
};

struct Hypothesis {
  std::vector<std::string> tokens;
  // Extended token ids: vocabulary ids, then V + k for an out-of-vocabulary
  // token first copied from input position k.
  std::vector<int> ids;
  double score = 0;  // Total log-probability including end of sequence.
};

// Attention encoder-decoder with copying. The decoder starts from
// tanh(W_init [fwd_m; bwd_1] + b_init), predicts from [h_j; c_j], and feeds
// [embed(z_j); c_j] into the next step. Dropout applies to encoder states
// and to the decoder state entering the output layer.
class Seq2Seq {
 public:
  static constexpr std::string_view kEos = "</s>";

  Seq2Seq(Seq2SeqConfig config, Vocab input, Vocab output);
  Seq2Seq(const Seq2Seq&) = delete;
  Seq2Seq& operator=(const Seq2Seq&) = delete;

  void init(Rng& rng);

  // Negative log-likelihood of `output` followed by end of sequence. With
  // `dropoutRng` set and a positive dropout rate, samples dropout masks.
  // With `backward`, accumulates parameter gradients. Throws EmptyInput and
  // NonFiniteLoss.
  double loss(const std::vector<std::string>& input,
              const std::vector<std::string>& output, Rng* dropoutRng,
              bool backward);

  double logProb(const std::vector<std::string>& input,
                 const std::vector<std::string>& output) const;

  // Length-bounded beam search. Finished hypotheses are ranked by score,
  // then by id sequence. Returns at most `beam` of them.
  std::vector<Hypothesis> beamSearch(const std::vector<std::string>& input,
                                     int beam, int maxLen) const;

  // Attention rows (one per output token, excluding end of sequence) under
  // teacher forcing. Throws UnknownToken.
  Mat forcedAttention(const std::vector<std::string>& input,
                      const std::vector<std::string>& output) const;

  // Copy result of each input token, "" when not copyable.
  std::vector<std::string> copyTargets(
      const std::vector<std::string>& input) const;

  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }
  const Seq2SeqConfig& config() const { return config_; }
  const Vocab& inputVocab() const { return in_; }
  const Vocab& outputVocab() const { return out_; }

  std::string configJson() const;
  static std::unique_ptr<Seq2Seq> fromConfigJson(const std::string& text);

 private:
  struct Encoding;
  Encoding encode(const std::vector<std::string>& input, Rng* dropoutRng,
                  bool keepTrace) const;

  Seq2SeqConfig config_;
  Vocab in_;
  Vocab out_;
  int eos_;
  ParamStore params_;
  Param* embIn_;
  Param* embOut_;
  BiLstm encoder_;
  Param* initW_;
  Param* initB_;
  LstmCell decoder_;
  Param* attW_;
  Param* outU_;
  Param* outB_;
};

}  // namespace zsp::nn

#endif  // ZSP_NN_SEQ2SEQ_H_
