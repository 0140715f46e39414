#ifndef ZSP_NN_OPTIM_H_
#define ZSP_NN_OPTIM_H_

#include <vector>

#include "zsp/nn/params.h"

namespace zsp::nn {

struct OptimizerConfig {
  enum class Kind : unsigned char { kSgd, kAdam };
  Kind kind = Kind::kSgd;
  double lr = 0.1;
  double l2 = 0.0;  // Added to gradients as l2 * value.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clipNorm = 5.0;  // Global gradient-norm clip; <= 0 disables.
};

class Optimizer {
 public:
  Optimizer(OptimizerConfig config, ParamStore& store);

  // Applies the accumulated gradients, then clears them.
  void step();
  long steps() const { return steps_; }
  const OptimizerConfig& config() const { return config_; }

 private:
  OptimizerConfig config_;
  ParamStore& store_;
  std::vector<Mat> m_;
  std::vector<Mat> v_;
  long steps_ = 0;
};

}  // namespace zsp::nn

#endif  // ZSP_NN_OPTIM_H_
