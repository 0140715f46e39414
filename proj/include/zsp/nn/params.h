#ifndef ZSP_NN_PARAMS_H_
#define ZSP_NN_PARAMS_H_

#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace zsp::nn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Seeded generator whose derived draws are identical on every platform
// (the standard distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

struct Param {
  std::string name;
  Mat value;
  Mat grad;
};

// Named parameter tensors with gradient buffers, in registration order.
// Addresses are stable.
class ParamStore {
 public:
  ParamStore() = default;
  ParamStore(const ParamStore&) = delete;
  ParamStore& operator=(const ParamStore&) = delete;

  Param* add(std::string name, int rows, int cols = 1);
  Param* find(std::string_view name);
  const Param* find(std::string_view name) const;

  std::deque<Param>& all() { return params_; }
  const std::deque<Param>& all() const { return params_; }

  void zeroGrad();
  std::size_t count() const;
  std::vector<Mat> snapshot() const;
  // Throws DimMismatch if `values` does not match the layout.
  void restore(const std::vector<Mat>& values);

 private:
  std::deque<Param> params_;
};

// Fills `m` with draws from uniform(-scale, scale) in column-major order.
void fillUniform(Mat& m, Rng& rng, double scale);

// Inverted dropout mask: entries are 0 with probability `rate`, otherwise
// 1 / (1 - rate).
Vec dropoutMask(int size, double rate, Rng& rng);

// Numerically stable softmax; entries equal to -infinity get probability 0.
Vec softmax(const Vec& logits);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace zsp::nn

#endif  // ZSP_NN_PARAMS_H_
