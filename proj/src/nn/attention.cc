#include "zsp/nn/attention.h"

#include <limits>

#include "zsp/errors.h"

namespace zsp::nn {

Prediction attendAndPredict(const Vec& h, const Vec& hOut, const Mat& states,
                            const Mat& wa, const Mat& u, const Vec& bu,
                            const std::vector<bool>& copyable) {
  const Eigen::Index m = states.cols();
  if (wa.rows() != h.size() || wa.cols() != states.rows() ||
      u.cols() != h.size() + states.rows() || bu.size() != u.rows() ||
      hOut.size() != h.size() ||
      static_cast<Eigen::Index>(copyable.size()) != m) {
    throw DimMismatch("attendAndPredict: inconsistent shapes");
  }
  Prediction p;
  p.scores = states.transpose() * (wa.transpose() * h);
  p.attention = softmax(p.scores);
  p.context = states * p.attention;
  p.output.resize(h.size() + states.rows());
  p.output << hOut, p.context;
  const Eigen::Index V = u.rows();
  Vec logits(V + m);
  logits.head(V) = u * p.output + bu;
  for (Eigen::Index k = 0; k < m; ++k) {
    logits[V + k] = copyable[k] ? p.scores[k]
                                : -std::numeric_limits<double>::infinity();
  }
  p.probs = softmax(logits);
  return p;
}

Vec mergeActions(const Vec& probs, int vocabSize,
                 const std::vector<int>& copyTarget, int extendedSize) {
  Vec out = Vec::Zero(extendedSize);
  out.head(vocabSize) = probs.head(vocabSize);
  for (std::size_t k = 0; k < copyTarget.size(); ++k) {
    if (copyTarget[k] >= 0) out[copyTarget[k]] += probs[vocabSize + k];
  }
  return out;
}

}  // namespace zsp::nn
