#ifndef ZSP_NN_ATTENTION_H_
#define ZSP_NN_ATTENTION_H_

#include <vector>

#include "zsp/nn/params.h"

namespace zsp::nn {

struct Prediction {
  Vec scores;     // Bilinear attention scores e_k = h^T Wa b_k.
  Vec attention;  // softmax(scores).
  Vec context;    // Sum_k attention_k b_k.
  Vec output;     // [h; context], the input of the output layer.
  // Joint distribution over V generation actions followed by one copy action
  // per input position. Copy logits are the attention scores; positions that
  // cannot be copied get probability 0.
  Vec probs;
};

// `states` holds encoder states b_k as columns. `h` is the decoder state
// used for attention; `hOut` (h after dropout, or h itself) feeds the output
// layer. Throws DimMismatch.
Prediction attendAndPredict(const Vec& h, const Vec& hOut, const Mat& states,
                            const Mat& wa, const Mat& u, const Vec& bu,
                            const std::vector<bool>& copyable);

// Folds copy actions into token probabilities. `copyTarget[k]` is the
// extended token id produced by copying position k, or -1. The result has
// `extendedSize` entries.
Vec mergeActions(const Vec& probs, int vocabSize,
                 const std::vector<int>& copyTarget, int extendedSize);

}  // namespace zsp::nn

#endif  // ZSP_NN_ATTENTION_H_
