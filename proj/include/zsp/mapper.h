#ifndef ZSP_MAPPER_H_
#define ZSP_MAPPER_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zsp/delex.h"
#include "zsp/lf.h"
#include "zsp/nn/optim.h"
#include "zsp/nn/seq2seq.h"

namespace zsp::mapper {

struct SeqPair {
  std::vector<std::string> input;
  std::vector<std::string> output;
};

struct TrainConfig {
  int epochs = 22;
  nn::OptimizerConfig optimizer{.kind = nn::OptimizerConfig::Kind::kSgd,
                                .lr = 0.1,
                                .l2 = 0.001};
  std::uint64_t seed = 1;
  int maxDecode = 80;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0;         // Mean per-example negative log-likelihood.
  double devAccuracy = 0;  // Greedy exact-match rate on the dev set.
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int bestEpoch = 0;
  double bestDevAccuracy = 0;
};

// Online training for the epoch budget; parameters of the epoch with the best
// dev exact match are restored at the end (the last epoch when `dev` is
// empty). Throws EmptyTrainingSet.
TrainReport trainSeq2Seq(nn::Seq2Seq& model, const std::vector<SeqPair>& train,
                         const std::vector<SeqPair>& dev,
                         const TrainConfig& config);

double exactMatch(const nn::Seq2Seq& model, const std::vector<SeqPair>& data,
                  int maxDecode);

// Builds vocabularies from `train` (every input token seen at least once;
// all output tokens).
std::unique_ptr<nn::Seq2Seq> makeSeq2Seq(const nn::Seq2SeqConfig& config,
                                         const std::vector<SeqPair>& train);

struct MapperConfig {
  nn::Seq2SeqConfig model{.embed = 100,
                          .hidden = 300,
                          .decoderHidden = 300,
                          .dropout = 0.0,
                          .initScale = 0.08,
                          .copy = nn::CopyMode::kTable,
                          .copyTable = {{"NUM", "$NUM"},
                                        {"DATE", "$DATE"},
                                        {"ENT", "$ENT"}}};
  TrainConfig train;
};

// Mapper input for an abstract utterance: abstract words as is, kept words
// lowercased.
std::vector<std::string> mapperInput(const delex::AbstractUtterance& utterance);

struct AbstractHypothesis {
  std::vector<std::string> tokens;
  double score = 0;
  // Parses as an abstract logical form.
  bool valid = false;
};

class StructureMapper {
 public:
  static constexpr const char* kKind = "structure-mapper";

  explicit StructureMapper(std::unique_ptr<nn::Seq2Seq> model)
      : model_(std::move(model)) {}

  // Throws EmptyTrainingSet.
  static std::unique_ptr<StructureMapper> train(
      const std::vector<SeqPair>& train, const std::vector<SeqPair>& dev,
      const MapperConfig& config, TrainReport* report = nullptr);

  std::vector<AbstractHypothesis> predict(const std::vector<std::string>& input,
                                          int beam, int maxLen = 80) const;

  // Decoder attention rows for every output token. Throws UnknownToken.
  nn::Mat decoderAttention(const std::vector<std::string>& input,
                           const std::vector<std::string>& absLf) const;

  const nn::Seq2Seq& model() const { return *model_; }
  nn::Seq2Seq& model() { return *model_; }

  void save(const std::string& path) const;
  static std::unique_ptr<StructureMapper> load(const std::string& path);

 private:
  std::unique_ptr<nn::Seq2Seq> model_;
};

}  // namespace zsp::mapper

#endif  // ZSP_MAPPER_H_
