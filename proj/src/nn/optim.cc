#include "zsp/nn/optim.h"

#include <cmath>

namespace zsp::nn {

Optimizer::Optimizer(OptimizerConfig config, ParamStore& store)
    : config_(config), store_(store) {
  if (config_.kind == OptimizerConfig::Kind::kAdam) {
    for (const auto& p : store_.all()) {
      m_.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
      v_.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
    }
  }
}

void Optimizer::step() {
  ++steps_;
  auto& params = store_.all();
  if (config_.clipNorm > 0) {
    double sq = 0;
    for (const auto& p : params) sq += p.grad.squaredNorm();
    double norm = std::sqrt(sq);
    if (norm > config_.clipNorm) {
      double scale = config_.clipNorm / norm;
      for (auto& p : params) p.grad *= scale;
    }
  }
  const double lr = config_.lr;
  if (config_.kind == OptimizerConfig::Kind::kSgd) {
    for (auto& p : params) {
      if (config_.l2 > 0) p.grad += config_.l2 * p.value;
      p.value -= lr * p.grad;
      p.grad.setZero();
    }
    return;
  }
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Param& p = params[i];
    if (config_.l2 > 0) p.grad += config_.l2 * p.value;
    m_[i] = b1 * m_[i] + (1 - b1) * p.grad;
    v_[i] = b2 * v_[i] + (1 - b2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= lr * (m_[i].array() / c1) /
                       ((v_[i].array() / c2).sqrt() + config_.epsilon);
    p.grad.setZero();
  }
}

}  // namespace zsp::nn
