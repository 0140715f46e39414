#ifndef ZSP_STUDENT_H_
#define ZSP_STUDENT_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "zsp/nn/lstm.h"
#include "zsp/nn/optim.h"
#include "zsp/nn/params.h"
#include "zsp/nn/vocab.h"
#include "zsp/teacher.h"

namespace zsp::align {

struct AlignerConfig {
  int embed = 100;
  int hidden = 250;  // Per direction, both encoders.
  double dropout = 0.4;
  double initScale = 0.08;
};

struct AlignerTrainConfig {
  int epochs = 30;
  nn::OptimizerConfig optimizer{.kind = nn::OptimizerConfig::Kind::kAdam,
                                .lr = 0.0002};
  std::uint64_t seed = 1;
};

// An abstract pair with teacher links. Only slot rows enter the loss, and
// slots linked to NULL are skipped.
struct AlignedPair {
  std::vector<std::string> utterance;
  std::vector<std::string> lf;
  std::vector<std::size_t> slots;
  Links links;  // Per LF position: utterance position or -1.
};

struct AlignerEpoch {
  int epoch = 0;
  double loss = 0;
  double devAccuracy = 0;
};

struct AlignerReport {
  std::vector<AlignerEpoch> epochs;
  int bestEpoch = 0;
  double bestDevAccuracy = 0;
};

// Bilinear slot aligner: e_ij = s_i^T W b_j, where s_i are BiLSTM states of
// the abstract logical form and b_j those of the abstract utterance, and
// p(j | i) = softmax_j(e_ij).
class SlotAligner {
 public:
  static constexpr const char* kKind = "slot-aligner";

  SlotAligner(AlignerConfig config, nn::Vocab utterance, nn::Vocab lf);
  SlotAligner(const SlotAligner&) = delete;
  SlotAligner& operator=(const SlotAligner&) = delete;

  void init(nn::Rng& rng);

  // -sum over linked slot rows of log p(link | slot).
  double loss(const AlignedPair& pair, nn::Rng* dropoutRng, bool backward);

  // Rows for the given LF positions; each row is a distribution over
  // utterance positions.
  nn::Mat align(const std::vector<std::string>& utterance,
                const std::vector<std::string>& lf,
                const std::vector<std::size_t>& rows) const;

  nn::ParamStore& params() { return params_; }
  const AlignerConfig& config() const { return config_; }

  std::string configJson() const;
  static std::unique_ptr<SlotAligner> fromConfigJson(const std::string& text);
  void save(const std::string& path) const;
  static std::unique_ptr<SlotAligner> load(const std::string& path);

  // Throws EmptyTrainingSet.
  static std::unique_ptr<SlotAligner> train(
      const std::vector<AlignedPair>& train,
      const std::vector<AlignedPair>& dev, const AlignerConfig& config,
      const AlignerTrainConfig& trainConfig, AlignerReport* report = nullptr);

 private:
  struct Forward;
  Forward forward(const std::vector<std::string>& utterance,
                  const std::vector<std::string>& lf, nn::Rng* dropoutRng,
                  bool keepTrace) const;

  AlignerConfig config_;
  nn::Vocab uttVocab_;
  nn::Vocab lfVocab_;
  nn::ParamStore params_;
  nn::Param* uttEmbed_;
  nn::Param* lfEmbed_;
  nn::BiLstm uttEncoder_;
  nn::BiLstm lfEncoder_;
  nn::Param* w_;
};

// Fraction of linked slot rows whose argmax equals the link.
double alignmentAccuracy(const SlotAligner& aligner,
                         const std::vector<AlignedPair>& data);

}  // namespace zsp::align

#endif  // ZSP_STUDENT_H_
