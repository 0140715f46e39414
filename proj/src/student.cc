#include "zsp/student.h"

#include <cmath>
#include <numeric>

#include "json.hpp"
#include "zsp/errors.h"
#include "zsp/nn/checkpoint.h"

namespace zsp::align {

using nlohmann::json;
using nn::Mat;
using nn::Vec;

struct SlotAligner::Forward {
  std::vector<int> uttIds;
  std::vector<int> lfIds;
  nn::BiLstmTrace uttTrace;
  nn::BiLstmTrace lfTrace;
  std::vector<Vec> uttMasks;
  std::vector<Vec> lfMasks;
  Mat b;  // Utterance states after dropout, one column per position.
  Mat s;  // LF states after dropout.
};

SlotAligner::SlotAligner(AlignerConfig config, nn::Vocab utterance,
                         nn::Vocab lf)
    : config_(config),
      uttVocab_(std::move(utterance)),
      lfVocab_(std::move(lf)) {
  const int E = config_.embed, H = config_.hidden;
  uttEmbed_ = params_.add("embed.utterance", E, uttVocab_.size());
  lfEmbed_ = params_.add("embed.lf", E, lfVocab_.size());
  uttEncoder_ = nn::BiLstm(params_, "encoder.utterance", E, H);
  lfEncoder_ = nn::BiLstm(params_, "encoder.lf", E, H);
  w_ = params_.add("bilinear.W", 2 * H, 2 * H);
}

void SlotAligner::init(nn::Rng& rng) {
  const double s = config_.initScale;
  nn::fillUniform(uttEmbed_->value, rng, s);
  nn::fillUniform(lfEmbed_->value, rng, s);
  uttEncoder_.init(rng, s);
  lfEncoder_.init(rng, s);
  nn::fillUniform(w_->value, rng, s);
}

SlotAligner::Forward SlotAligner::forward(
    const std::vector<std::string>& utterance,
    const std::vector<std::string>& lf, nn::Rng* dropoutRng,
    bool keepTrace) const {
  if (utterance.empty() || lf.empty()) {
    throw EmptyInput("aligner input with an empty side");
  }
  const int H2 = 2 * config_.hidden;
  bool drop = dropoutRng && config_.dropout > 0;
  Forward f;
  auto run = [&](const std::vector<std::string>& tokens, const nn::Vocab& vocab,
                 const nn::Param* embed, const nn::BiLstm& enc,
                 std::vector<int>& ids, nn::BiLstmTrace& trace,
                 std::vector<Vec>& masks, Mat& out) {
    std::vector<Vec> inputs;
    for (const auto& t : tokens) {
      ids.push_back(vocab.id(t));
      inputs.push_back(embed->value.col(ids.back()));
    }
    std::vector<Vec> states =
        nn::biLstmEncode(enc, inputs, keepTrace ? &trace : nullptr);
    out.resize(H2, static_cast<Eigen::Index>(tokens.size()));
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (drop) {
        masks.push_back(nn::dropoutMask(H2, config_.dropout, *dropoutRng));
        out.col(k) = states[k].cwiseProduct(masks.back());
      } else {
        out.col(k) = states[k];
      }
    }
  };
  run(utterance, uttVocab_, uttEmbed_, uttEncoder_, f.uttIds, f.uttTrace,
      f.uttMasks, f.b);
  run(lf, lfVocab_, lfEmbed_, lfEncoder_, f.lfIds, f.lfTrace, f.lfMasks, f.s);
  return f;
}

double SlotAligner::loss(const AlignedPair& pair, nn::Rng* dropoutRng,
                         bool backward) {
  Forward f = forward(pair.utterance, pair.lf, dropoutRng, backward);
  const int H2 = 2 * config_.hidden;
  const auto m = static_cast<Eigen::Index>(pair.utterance.size());
  Mat wb = w_->value * f.b;  // Row i of s^T W B is s_i^T (W B).
  Mat dB = Mat::Zero(H2, m);
  Mat dS = Mat::Zero(H2, f.s.cols());
  double total = 0;
  for (std::size_t i : pair.slots) {
    int gold = pair.links[i];
    if (gold < 0) continue;
    Vec e = wb.transpose() * f.s.col(static_cast<Eigen::Index>(i));
    Vec p = nn::softmax(e);
    total -= std::log(p[gold]);
    if (!backward) continue;
    Vec de = p;
    de[gold] -= 1;
    Vec si = f.s.col(static_cast<Eigen::Index>(i));
    dS.col(static_cast<Eigen::Index>(i)) += wb * de;
    Vec bde = f.b * de;
    w_->grad.noalias() += si * bde.transpose();
    dB.noalias() += (w_->value.transpose() * si) * de.transpose();
  }
  if (!std::isfinite(total)) throw NonFiniteLoss("non-finite aligner loss");
  if (!backward) return total;
  auto back = [&](const Mat& d, const std::vector<Vec>& masks,
                  const nn::BiLstm& enc, const nn::BiLstmTrace& trace,
                  const std::vector<int>& ids, nn::Param* embed) {
    std::vector<Vec> dStates(static_cast<std::size_t>(d.cols()));
    for (Eigen::Index k = 0; k < d.cols(); ++k) {
      dStates[k] = d.col(k);
      if (!masks.empty()) dStates[k] = dStates[k].cwiseProduct(masks[k]);
    }
    std::vector<Vec> dIn = nn::biLstmBackward(enc, trace, dStates);
    for (std::size_t k = 0; k < ids.size(); ++k) embed->grad.col(ids[k]) += dIn[k];
  };
  back(dB, f.uttMasks, uttEncoder_, f.uttTrace, f.uttIds, uttEmbed_);
  back(dS, f.lfMasks, lfEncoder_, f.lfTrace, f.lfIds, lfEmbed_);
  return total;
}

Mat SlotAligner::align(const std::vector<std::string>& utterance,
                       const std::vector<std::string>& lf,
                       const std::vector<std::size_t>& rows) const {
  Forward f = forward(utterance, lf, nullptr, false);
  Mat wb = w_->value * f.b;
  Mat out(static_cast<Eigen::Index>(rows.size()), wb.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Vec e = wb.transpose() * f.s.col(static_cast<Eigen::Index>(rows[r]));
    out.row(static_cast<Eigen::Index>(r)) = nn::softmax(e).transpose();
  }
  return out;
}

std::string SlotAligner::configJson() const {
  json j = {{"embed", config_.embed},
            {"hidden", config_.hidden},
            {"dropout", config_.dropout},
            {"init_scale", config_.initScale},
            {"utterance_vocab", uttVocab_.tokens()},
            {"lf_vocab", lfVocab_.tokens()}};
  return j.dump();
}

std::unique_ptr<SlotAligner> SlotAligner::fromConfigJson(const std::string& text) {
  json j = json::parse(text);
  AlignerConfig c{j.at("embed"), j.at("hidden"), j.at("dropout"),
                  j.at("init_scale")};
  return std::make_unique<SlotAligner>(
      c, nn::Vocab(j.at("utterance_vocab").get<std::vector<std::string>>()),
      nn::Vocab(j.at("lf_vocab").get<std::vector<std::string>>()));
}

void SlotAligner::save(const std::string& path) const {
  nn::writeCheckpoint(path, kKind, configJson(), params_);
}

std::unique_ptr<SlotAligner> SlotAligner::load(const std::string& path) {
  nn::Checkpoint ckpt = nn::readCheckpoint(path);
  if (ckpt.kind != kKind) {
    throw FormatError(path, 0, "expected a " + std::string(kKind) +
                                   " checkpoint, found " + ckpt.kind);
  }
  auto model = fromConfigJson(ckpt.config);
  nn::loadParams(ckpt, model->params());
  return model;
}

std::unique_ptr<SlotAligner> SlotAligner::train(
    const std::vector<AlignedPair>& train, const std::vector<AlignedPair>& dev,
    const AlignerConfig& config, const AlignerTrainConfig& trainConfig,
    AlignerReport* report) {
  std::vector<std::size_t> usable;
  nn::Vocab utt, lf;
  for (std::size_t k = 0; k < train.size(); ++k) {
    const AlignedPair& p = train[k];
    for (const auto& t : p.utterance) utt.add(t);
    for (const auto& t : p.lf) lf.add(t);
    bool linked = false;
    for (std::size_t i : p.slots) linked |= p.links[i] >= 0;
    if (linked && !p.utterance.empty()) usable.push_back(k);
  }
  if (usable.empty()) throw EmptyTrainingSet("no aligned slot rows to train on");
  auto model = std::make_unique<SlotAligner>(config, std::move(utt), std::move(lf));
  nn::Rng rng(trainConfig.seed);
  model->init(rng);
  nn::Optimizer opt(trainConfig.optimizer, model->params());
  model->params().zeroGrad();

  AlignerReport r;
  std::vector<Mat> best;
  for (int epoch = 1; epoch <= trainConfig.epochs; ++epoch) {
    rng.shuffle(usable);
    double total = 0;
    for (std::size_t k : usable) {
      total += model->loss(train[k], &rng, true);
      opt.step();
    }
    AlignerEpoch stats{epoch, total / static_cast<double>(usable.size()), 0};
    if (!dev.empty()) {
      stats.devAccuracy = alignmentAccuracy(*model, dev);
      if (best.empty() || stats.devAccuracy > r.bestDevAccuracy) {
        r.bestDevAccuracy = stats.devAccuracy;
        r.bestEpoch = epoch;
        best = model->params().snapshot();
      }
    }
    r.epochs.push_back(stats);
  }
  if (!best.empty()) {
    model->params().restore(best);
  } else {
    r.bestEpoch = trainConfig.epochs;
  }
  if (report) *report = std::move(r);
  return model;
}

double alignmentAccuracy(const SlotAligner& aligner,
                         const std::vector<AlignedPair>& data) {
  std::size_t rows = 0, hits = 0;
  for (const auto& p : data) {
    std::vector<std::size_t> linked;
    for (std::size_t i : p.slots) {
      if (p.links[i] >= 0) linked.push_back(i);
    }
    if (linked.empty() || p.utterance.empty()) continue;
    Mat a = aligner.align(p.utterance, p.lf, linked);
    for (std::size_t r = 0; r < linked.size(); ++r) {
      Eigen::Index arg;
      a.row(static_cast<Eigen::Index>(r)).maxCoeff(&arg);
      ++rows;
      if (arg == p.links[linked[r]]) ++hits;
    }
  }
  return rows ? static_cast<double>(hits) / static_cast<double>(rows) : 0.0;
}

}  // namespace zsp::align
