#include "zsp/nn/params.h"

#include <cmath>
#include <limits>

#include "zsp/errors.h"

namespace zsp::nn {

Param* ParamStore::add(std::string name, int rows, int cols) {
  if (find(name)) throw Error("duplicate parameter " + name);
  params_.push_back(
      {std::move(name), Mat::Zero(rows, cols), Mat::Zero(rows, cols)});
  return &params_.back();
}

Param* ParamStore::find(std::string_view name) {
  for (auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Param* ParamStore::find(std::string_view name) const {
  for (const auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void ParamStore::zeroGrad() {
  for (auto& p : params_) p.grad.setZero();
}

std::size_t ParamStore::count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

std::vector<Mat> ParamStore::snapshot() const {
  std::vector<Mat> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.value);
  return out;
}

void ParamStore::restore(const std::vector<Mat>& values) {
  if (values.size() != params_.size()) {
    throw DimMismatch("snapshot has " + std::to_string(values.size()) +
                      " tensors, store has " + std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Param& p = params_[i];
    if (values[i].rows() != p.value.rows() ||
        values[i].cols() != p.value.cols()) {
      throw DimMismatch("shape mismatch for " + p.name);
    }
    p.value = values[i];
  }
}

void fillUniform(Mat& m, Rng& rng, double scale) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, j) = rng.uniform(-scale, scale);
    }
  }
}

Vec dropoutMask(int size, double rate, Rng& rng) {
  Vec mask(size);
  double keep = 1.0 / (1.0 - rate);
  for (int i = 0; i < size; ++i) mask[i] = rng.uniform() < rate ? 0.0 : keep;
  return mask;
}

Vec softmax(const Vec& logits) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : logits) mx = std::max(mx, x);
  Vec out(logits.size());
  if (!std::isfinite(mx)) {
    out.setConstant(1.0 / static_cast<double>(logits.size()));
    return out;
  }
  double sum = 0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  return out / sum;
}

}  // namespace zsp::nn
