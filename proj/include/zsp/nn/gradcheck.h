#ifndef ZSP_NN_GRADCHECK_H_
#define ZSP_NN_GRADCHECK_H_

#include <functional>
#include <string>

#include "zsp/nn/params.h"

namespace zsp::nn {

struct GradCheckResult {
  // Max over tensors of |a - n| / (|a| + |n|) with Euclidean norms over the
  // tensor's entries; 0 for a tensor whose gradients are both zero.
  double maxRelError = 0;
  std::string worstParam;
  // Largest entrywise |a - n|, for diagnostics.
  double maxAbsError = 0;
  std::size_t checked = 0;
};

// Compares the gradients held in `store` against central differences of
// `loss`, which must evaluate the loss at the current values without
// touching the gradient buffers.
GradCheckResult gradCheck(ParamStore& store, const std::function<double()>& loss,
                          double eps = 1e-5);

}  // namespace zsp::nn

#endif  // ZSP_NN_GRADCHECK_H_
