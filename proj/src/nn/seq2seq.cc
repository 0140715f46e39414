#include "zsp/nn/seq2seq.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "zsp/errors.h"

namespace zsp::nn {

using nlohmann::json;

struct Seq2Seq::Encoding {
  std::vector<int> ids;
  std::vector<Vec> inputs;
  std::vector<Vec> states;  // Before dropout.
  std::vector<Vec> masks;   // Empty without dropout.
  BiLstmTrace trace;
  Mat memory;  // Encoder states after dropout, one column per position.
  std::vector<bool> copyable;
  std::vector<std::string> copyTargets;
  Vec initInput;  // [fwd_m; bwd_1].
  Vec initH;
};

Seq2Seq::Seq2Seq(Seq2SeqConfig config, Vocab input, Vocab output)
    : config_(std::move(config)), in_(std::move(input)), out_(std::move(output)) {
  eos_ = out_.add(std::string(kEos));
  const int H = config_.hidden;
  const int D = config_.decoderHidden;
  embIn_ = params_.add("embed.in", config_.embed, in_.size());
  embOut_ = params_.add("embed.out", config_.embed, out_.size());
  encoder_ = BiLstm(params_, "encoder", config_.embed, H);
  initW_ = params_.add("decoder.init.W", D, 2 * H);
  initB_ = params_.add("decoder.init.b", D);
  decoder_ = LstmCell(params_, "decoder.lstm", config_.embed + 2 * H, D);
  attW_ = params_.add("attention.W", D, 2 * H);
  outU_ = params_.add("output.U", out_.size(), D + 2 * H);
  outB_ = params_.add("output.b", out_.size());
}

void Seq2Seq::init(Rng& rng) {
  const double s = config_.initScale;
  fillUniform(embIn_->value, rng, s);
  fillUniform(embOut_->value, rng, s);
  encoder_.init(rng, s);
  fillUniform(initW_->value, rng, s);
  initB_->value.setZero();
  decoder_.init(rng, s);
  fillUniform(attW_->value, rng, s);
  fillUniform(outU_->value, rng, s);
  outB_->value.setZero();
}

std::vector<std::string> Seq2Seq::copyTargets(
    const std::vector<std::string>& input) const {
  std::vector<std::string> out(input.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    switch (config_.copy) {
      case CopyMode::kNone:
        break;
      case CopyMode::kIdentity:
        out[k] = input[k];
        break;
      case CopyMode::kTable:
        if (auto it = config_.copyTable.find(input[k]);
            it != config_.copyTable.end()) {
          out[k] = it->second;
        }
        break;
    }
  }
  return out;
}

Seq2Seq::Encoding Seq2Seq::encode(const std::vector<std::string>& input,
                                  Rng* dropoutRng, bool keepTrace) const {
  if (input.empty()) throw EmptyInput("empty input sequence");
  const int H = config_.hidden;
  const std::size_t m = input.size();
  Encoding e;
  for (const auto& tok : input) {
    e.ids.push_back(in_.id(tok));
    e.inputs.push_back(embIn_->value.col(e.ids.back()));
  }
  e.states = biLstmEncode(encoder_, e.inputs, keepTrace ? &e.trace : nullptr);
  e.memory.resize(2 * H, static_cast<Eigen::Index>(m));
  bool drop = dropoutRng && config_.dropout > 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (drop) {
      e.masks.push_back(dropoutMask(2 * H, config_.dropout, *dropoutRng));
      e.memory.col(k) = e.states[k].cwiseProduct(e.masks.back());
    } else {
      e.memory.col(k) = e.states[k];
    }
  }
  e.copyTargets = copyTargets(input);
  for (const auto& t : e.copyTargets) e.copyable.push_back(!t.empty());
  e.initInput.resize(2 * H);
  e.initInput << e.states[m - 1].head(H), e.states[0].tail(H);
  e.initH = (initW_->value * e.initInput + initB_->value.col(0))
                .array()
                .tanh()
                .matrix();
  return e;
}

double Seq2Seq::loss(const std::vector<std::string>& input,
                     const std::vector<std::string>& output, Rng* dropoutRng,
                     bool backward) {
  Encoding e = encode(input, dropoutRng, backward);
  const int H = config_.hidden;
  const int D = config_.decoderHidden;
  const int V = out_.size();
  const std::size_t m = input.size();
  const std::size_t n = output.size() + 1;
  bool drop = dropoutRng && config_.dropout > 0;

  struct Step {
    Prediction pred;
    Vec h;
    Vec mask;
    std::vector<int> valid;
    double mass = 0;
    LstmCache cache;  // Transition to the next state.
    int inputId = 0;  // Output-embedding id fed to the next state.
  };
  std::vector<Step> steps(n);
  LstmState s{e.initH, Vec::Zero(D)};
  double total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Step& st = steps[j];
    const std::string& y = j + 1 < n ? output[j] : std::string(kEos);
    st.h = s.h;
    Vec hOut = s.h;
    if (drop) {
      st.mask = dropoutMask(D, config_.dropout, *dropoutRng);
      hOut = hOut.cwiseProduct(st.mask);
    }
    st.pred = attendAndPredict(s.h, hOut, e.memory, attW_->value,
                               outU_->value, outB_->value.col(0), e.copyable);
    bool inVocab = out_.contains(y);
    for (std::size_t k = 0; k < m; ++k) {
      if (e.copyable[k] && e.copyTargets[k] == y) {
        st.valid.push_back(V + static_cast<int>(k));
      }
    }
    if (inVocab || st.valid.empty()) st.valid.push_back(out_.id(y));
    for (int a : st.valid) st.mass += st.pred.probs[a];
    if (!(st.mass > 0) || !std::isfinite(st.mass)) {
      throw NonFiniteLoss("non-finite loss at output position " +
                          std::to_string(j));
    }
    total -= std::log(st.mass);
    if (j + 1 < n) {
      st.inputId = out_.id(y);
      Vec x(config_.embed + 2 * H);
      x << embOut_->value.col(st.inputId), st.pred.context;
      s = lstmStep(decoder_, x, s, backward ? &st.cache : nullptr);
    }
  }
  if (!std::isfinite(total)) throw NonFiniteLoss("non-finite sequence loss");
  if (!backward) return total;

  Mat dMemory = Mat::Zero(2 * H, static_cast<Eigen::Index>(m));
  Vec dhNext = Vec::Zero(D), dcNext = Vec::Zero(D);
  Vec dh, dc;
  for (std::size_t j = n; j-- > 0;) {
    Step& st = steps[j];
    Vec dCtx = Vec::Zero(2 * H);
    dh = Vec::Zero(D);
    dc = Vec::Zero(D);
    if (j + 1 < n) {
      Vec dx;
      lstmBackward(decoder_, st.cache, dhNext, dcNext, &dx, &dh, &dc);
      embOut_->grad.col(st.inputId) += dx.head(config_.embed);
      dCtx += dx.tail(2 * H);
    }
    // Softmax over all actions against the renormalized valid mass.
    Vec dLogits = st.pred.probs;
    for (int a : st.valid) dLogits[a] -= st.pred.probs[a] / st.mass;
    Vec dGen = dLogits.head(V);
    outU_->grad.noalias() += dGen * st.pred.output.transpose();
    outB_->grad.col(0) += dGen;
    Vec dOut = outU_->value.transpose() * dGen;
    Vec dhOut = dOut.head(D);
    if (st.mask.size()) dhOut = dhOut.cwiseProduct(st.mask);
    dh += dhOut;
    dCtx += dOut.tail(2 * H);
    const Vec& alpha = st.pred.attention;
    dMemory.noalias() += dCtx * alpha.transpose();
    Vec dAlpha = e.memory.transpose() * dCtx;
    Vec dScores =
        (alpha.array() * (dAlpha.array() - alpha.dot(dAlpha))).matrix() +
        dLogits.tail(static_cast<Eigen::Index>(m));
    Vec v = attW_->value.transpose() * st.h;
    dMemory.noalias() += v * dScores.transpose();
    Vec dv = e.memory * dScores;
    attW_->grad.noalias() += st.h * dv.transpose();
    dh += attW_->value * dv;
    dhNext = dh;
    dcNext = dc;
  }
  // Initial decoder state.
  Vec dPre = dhNext.cwiseProduct((1 - e.initH.array().square()).matrix());
  initW_->grad.noalias() += dPre * e.initInput.transpose();
  initB_->grad.col(0) += dPre;
  Vec dInit = initW_->value.transpose() * dPre;

  std::vector<Vec> dStates(m);
  for (std::size_t k = 0; k < m; ++k) {
    dStates[k] = dMemory.col(k);
    if (!e.masks.empty()) dStates[k] = dStates[k].cwiseProduct(e.masks[k]);
  }
  dStates[m - 1].head(H) += dInit.head(H);
  dStates[0].tail(H) += dInit.tail(H);
  std::vector<Vec> dInputs = biLstmBackward(encoder_, e.trace, dStates);
  for (std::size_t k = 0; k < m; ++k) embIn_->grad.col(e.ids[k]) += dInputs[k];
  return total;
}

double Seq2Seq::logProb(const std::vector<std::string>& input,
                        const std::vector<std::string>& output) const {
  return -const_cast<Seq2Seq*>(this)->loss(input, output, nullptr, false);
}

std::vector<Hypothesis> Seq2Seq::beamSearch(
    const std::vector<std::string>& input, int beam, int maxLen) const {
  if (beam < 1 || maxLen <= 0 || input.empty()) return {};
  Encoding e = encode(input, nullptr, false);
  const int H = config_.hidden;
  const int V = out_.size();
  const int m = static_cast<int>(input.size());

  // Extended ids of copy results.
  std::vector<int> copyId(m, -1);
  for (int k = 0; k < m; ++k) {
    if (!e.copyable[k]) continue;
    const std::string& t = e.copyTargets[k];
    if (out_.contains(t)) {
      copyId[k] = out_.id(t);
      continue;
    }
    copyId[k] = V + k;
    for (int k2 = 0; k2 < k; ++k2) {
      if (e.copyable[k2] && e.copyTargets[k2] == t) {
        copyId[k] = V + k2;
        break;
      }
    }
  }
  auto tokenOf = [&](int id) -> const std::string& {
    return id < V ? out_.token(id) : e.copyTargets[id - V];
  };

  struct Live {
    LstmState s;
    Hypothesis hyp;
  };
  struct Cand {
    int parent;
    int token;
    double score;
    Vec context;
  };
  auto before = [](double sa, const std::vector<int>& ia, int ta, double sb,
                   const std::vector<int>& ib, int tb) {
    if (sa != sb) return sa > sb;
    std::size_t n = std::min(ia.size(), ib.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (ia[i] != ib[i]) return ia[i] < ib[i];
    }
    if (ia.size() != ib.size()) return ia.size() < ib.size();
    return ta < tb;
  };

  std::vector<Live> live;
  live.push_back({{e.initH, Vec::Zero(config_.decoderHidden)}, {}});
  std::vector<Hypothesis> finished;
  for (int step = 0; step < maxLen && !live.empty(); ++step) {
    std::vector<Cand> cands;
    std::vector<Vec> contexts(live.size());
    for (std::size_t li = 0; li < live.size(); ++li) {
      const Live& l = live[li];
      Prediction p = attendAndPredict(l.s.h, l.s.h, e.memory, attW_->value,
                                      outU_->value, outB_->value.col(0),
                                      e.copyable);
      Vec merged = mergeActions(p.probs, V, copyId, V + m);
      std::vector<int> order;
      for (int t = 0; t < V + m; ++t) {
        if (merged[t] > 0) order.push_back(t);
      }
      std::size_t keep = std::min<std::size_t>(beam, order.size());
      std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                        [&](int a, int b) {
                          if (merged[a] != merged[b]) return merged[a] > merged[b];
                          return a < b;
                        });
      for (std::size_t r = 0; r < keep; ++r) {
        int t = order[r];
        cands.push_back({static_cast<int>(li), t,
                         l.hyp.score + std::log(merged[t]), {}});
      }
      contexts[li] = std::move(p.context);
    }
    std::sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
      return before(a.score, live[a.parent].hyp.ids, a.token, b.score,
                    live[b.parent].hyp.ids, b.token);
    });
    if (static_cast<int>(cands.size()) > beam) cands.resize(beam);
    std::vector<Live> next;
    for (const Cand& c : cands) {
      const Live& parent = live[c.parent];
      Hypothesis hyp = parent.hyp;
      hyp.ids.push_back(c.token);
      hyp.score = c.score;
      if (c.token == eos_) {
        finished.push_back(std::move(hyp));
        continue;
      }
      hyp.tokens.push_back(tokenOf(c.token));
      Vec x(config_.embed + 2 * H);
      x << embOut_->value.col(c.token < V ? c.token : out_.id(tokenOf(c.token))),
          contexts[c.parent];
      next.push_back({lstmStep(decoder_, x, parent.s), std::move(hyp)});
    }
    live = std::move(next);
    if (!finished.empty() && !live.empty()) {
      double bestFinished = -std::numeric_limits<double>::infinity();
      for (const auto& f : finished) bestFinished = std::max(bestFinished, f.score);
      double bestLive = -std::numeric_limits<double>::infinity();
      for (const auto& l : live) bestLive = std::max(bestLive, l.hyp.score);
      if (bestFinished >= bestLive) break;
    }
  }
  std::sort(finished.begin(), finished.end(),
            [&](const Hypothesis& a, const Hypothesis& b) {
              return before(a.score, a.ids, 0, b.score, b.ids, 0);
            });
  if (static_cast<int>(finished.size()) > beam) finished.resize(beam);
  return finished;
}

Mat Seq2Seq::forcedAttention(const std::vector<std::string>& input,
                             const std::vector<std::string>& output) const {
  for (const auto& t : output) {
    if (!out_.contains(t)) throw UnknownToken(t);
  }
  Encoding e = encode(input, nullptr, false);
  const int H = config_.hidden;
  Mat rows(static_cast<Eigen::Index>(output.size()),
           static_cast<Eigen::Index>(input.size()));
  LstmState s{e.initH, Vec::Zero(config_.decoderHidden)};
  for (std::size_t j = 0; j < output.size(); ++j) {
    Prediction p = attendAndPredict(s.h, s.h, e.memory, attW_->value,
                                    outU_->value, outB_->value.col(0),
                                    e.copyable);
    rows.row(j) = p.attention.transpose();
    Vec x(config_.embed + 2 * H);
    x << embOut_->value.col(out_.id(output[j])), p.context;
    s = lstmStep(decoder_, x, s);
  }
  return rows;
}

std::string Seq2Seq::configJson() const {
  static const char* kModes[] = {"none", "identity", "table"};
  json j = {{"embed", config_.embed},
            {"hidden", config_.hidden},
            {"decoder_hidden", config_.decoderHidden},
            {"dropout", config_.dropout},
            {"init_scale", config_.initScale},
            {"copy", kModes[static_cast<int>(config_.copy)]},
            {"copy_table", config_.copyTable},
            {"input_vocab", in_.tokens()},
            {"output_vocab", out_.tokens()}};
  return j.dump();
}

std::unique_ptr<Seq2Seq> Seq2Seq::fromConfigJson(const std::string& text) {
  json j = json::parse(text);
  Seq2SeqConfig c;
  c.embed = j.at("embed");
  c.hidden = j.at("hidden");
  c.decoderHidden = j.at("decoder_hidden");
  c.dropout = j.at("dropout");
  c.initScale = j.at("init_scale");
  std::string mode = j.at("copy");
  c.copy = mode == "none"       ? CopyMode::kNone
           : mode == "identity" ? CopyMode::kIdentity
                                : CopyMode::kTable;
  c.copyTable = j.at("copy_table").get<std::map<std::string, std::string>>();
  auto in = j.at("input_vocab").get<std::vector<std::string>>();
  auto out = j.at("output_vocab").get<std::vector<std::string>>();
  return std::make_unique<Seq2Seq>(std::move(c), Vocab(in), Vocab(out));
}

}  // namespace zsp::nn
