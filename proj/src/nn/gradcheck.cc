#include "zsp/nn/gradcheck.h"

#include <algorithm>
#include <cmath>

namespace zsp::nn {

GradCheckResult gradCheck(ParamStore& store, const std::function<double()>& loss,
                          double eps) {
  GradCheckResult result;
  for (Param& p : store.all()) {
    Mat numeric(p.value.rows(), p.value.cols());
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      double saved = p.value.data()[i];
      p.value.data()[i] = saved + eps;
      double up = loss();
      p.value.data()[i] = saved - eps;
      double down = loss();
      p.value.data()[i] = saved;
      numeric.data()[i] = (up - down) / (2 * eps);
      ++result.checked;
    }
    double diff = (p.grad - numeric).norm();
    double scale = p.grad.norm() + numeric.norm();
    double rel = scale > 0 ? diff / scale : 0.0;
    result.maxAbsError =
        std::max(result.maxAbsError, (p.grad - numeric).cwiseAbs().maxCoeff());
    if (rel > result.maxRelError || result.worstParam.empty()) {
      result.maxRelError = rel;
      result.worstParam = p.name;
    }
  }
  return result;
}

}  // namespace zsp::nn
