#include "zsp/mapper.h"

#include <cctype>
#include <numeric>

#include "zsp/errors.h"
#include "zsp/nn/checkpoint.h"

namespace zsp::mapper {

TrainReport trainSeq2Seq(nn::Seq2Seq& model, const std::vector<SeqPair>& train,
                         const std::vector<SeqPair>& dev,
                         const TrainConfig& config) {
  if (train.empty()) throw EmptyTrainingSet("no training pairs");
  nn::Rng rng(config.seed);
  nn::Optimizer optimizer(config.optimizer, model.params());
  model.params().zeroGrad();
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainReport report;
  std::vector<nn::Mat> best;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0;
    for (std::size_t idx : order) {
      total += model.loss(train[idx].input, train[idx].output, &rng, true);
      optimizer.step();
    }
    EpochStats stats{epoch, total / static_cast<double>(train.size()), 0};
    if (!dev.empty()) {
      stats.devAccuracy = exactMatch(model, dev, config.maxDecode);
      if (best.empty() || stats.devAccuracy > report.bestDevAccuracy) {
        report.bestDevAccuracy = stats.devAccuracy;
        report.bestEpoch = epoch;
        best = model.params().snapshot();
      }
    }
    report.epochs.push_back(stats);
  }
  if (!best.empty()) {
    model.params().restore(best);
  } else {
    report.bestEpoch = config.epochs;
  }
  return report;
}

double exactMatch(const nn::Seq2Seq& model, const std::vector<SeqPair>& data,
                  int maxDecode) {
  if (data.empty()) return 0;
  std::size_t hits = 0;
  for (const auto& pair : data) {
    auto hyps = model.beamSearch(pair.input, 1, maxDecode);
    if (!hyps.empty() && hyps.front().tokens == pair.output) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

std::unique_ptr<nn::Seq2Seq> makeSeq2Seq(const nn::Seq2SeqConfig& config,
                                         const std::vector<SeqPair>& train) {
  if (train.empty()) throw EmptyTrainingSet("no training pairs");
  nn::Vocab in, out;
  for (const auto& pair : train) {
    for (const auto& t : pair.input) in.add(t);
    for (const auto& t : pair.output) out.add(t);
  }
  return std::make_unique<nn::Seq2Seq>(config, std::move(in), std::move(out));
}

std::vector<std::string> mapperInput(const delex::AbstractUtterance& utterance) {
  std::vector<std::string> out;
  out.reserve(utterance.tokens.size());
  for (std::size_t i = 0; i < utterance.tokens.size(); ++i) {
    std::string t = utterance.tokens[i];
    if (!delex::isAbstractWord(t)) {
      for (char& ch : t) {
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::unique_ptr<StructureMapper> StructureMapper::train(
    const std::vector<SeqPair>& train, const std::vector<SeqPair>& dev,
    const MapperConfig& config, TrainReport* report) {
  auto model = makeSeq2Seq(config.model, train);
  nn::Rng init(config.train.seed);
  model->init(init);
  TrainReport r = trainSeq2Seq(*model, train, dev, config.train);
  if (report) *report = std::move(r);
  return std::make_unique<StructureMapper>(std::move(model));
}

std::vector<AbstractHypothesis> StructureMapper::predict(
    const std::vector<std::string>& input, int beam, int maxLen) const {
  std::vector<AbstractHypothesis> out;
  for (auto& hyp : model_->beamSearch(input, beam, maxLen)) {
    AbstractHypothesis a{std::move(hyp.tokens), hyp.score, false};
    try {
      lf::delinearize(a.tokens, {.allowSlots = true});
      a.valid = true;
    } catch (const SyntaxError&) {
    }
    out.push_back(std::move(a));
  }
  return out;
}

nn::Mat StructureMapper::decoderAttention(
    const std::vector<std::string>& input,
    const std::vector<std::string>& absLf) const {
  return model_->forcedAttention(input, absLf);
}

void StructureMapper::save(const std::string& path) const {
  nn::writeCheckpoint(path, kKind, model_->configJson(), model_->params());
}

std::unique_ptr<StructureMapper> StructureMapper::load(const std::string& path) {
  nn::Checkpoint ckpt = nn::readCheckpoint(path);
  if (ckpt.kind != kKind) {
    throw FormatError(path, 0, "expected a " + std::string(kKind) +
                                   " checkpoint, found " + ckpt.kind);
  }
  auto model = nn::Seq2Seq::fromConfigJson(ckpt.config);
  nn::loadParams(ckpt, model->params());
  return std::make_unique<StructureMapper>(std::move(model));
}

}  // namespace zsp::mapper
