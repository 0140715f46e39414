#ifndef ZSP_NN_LSTM_H_
#define ZSP_NN_LSTM_H_

#include <string>
#include <vector>

#include "zsp/nn/params.h"

namespace zsp::nn {

// Gate layout in W (4H x (I + H)) and b (4H): input, forget, candidate,
// output. Pre-activations are W [x; h] + b.
struct LstmCell {
  LstmCell() = default;
  LstmCell(ParamStore& store, const std::string& prefix, int input,
           int hidden);

  // Uniform weights, zero biases except +1 on the forget gate.
  void init(Rng& rng, double scale) const;

  int input = 0;
  int hidden = 0;
  Param* w = nullptr;
  Param* b = nullptr;
};

struct LstmState {
  Vec h;
  Vec c;
};

LstmState zeroState(int hidden);

// Values kept by the forward step for backpropagation.
struct LstmCache {
  Vec xh;
  Vec i, f, g, o;
  Vec cPrev;
  Vec tanhC;
};

// Throws DimMismatch.
LstmState lstmStep(const LstmCell& cell, const Vec& x, const LstmState& s,
                   LstmCache* cache = nullptr);

// Accumulates parameter gradients and returns input/state gradients.
void lstmBackward(const LstmCell& cell, const LstmCache& cache, const Vec& dh,
                  const Vec& dc, Vec* dx, Vec* dhPrev, Vec* dcPrev);

struct BiLstm {
  BiLstm() = default;
  BiLstm(ParamStore& store, const std::string& prefix, int input, int hidden);
  void init(Rng& rng, double scale) const;

  LstmCell fwd;
  LstmCell bwd;
};

struct BiLstmTrace {
  std::vector<LstmCache> fwd;
  std::vector<LstmCache> bwd;
};

// b_k = [forward h_k; backward h_k]. Throws EmptyInput.
std::vector<Vec> biLstmEncode(const BiLstm& net, const std::vector<Vec>& inputs,
                              BiLstmTrace* trace = nullptr);

// `dStates[k]` is the gradient of b_k; returns input gradients.
std::vector<Vec> biLstmBackward(const BiLstm& net, const BiLstmTrace& trace,
                                const std::vector<Vec>& dStates);

}  // namespace zsp::nn

#endif  // ZSP_NN_LSTM_H_
