#ifndef ZSP_NN_CHECKPOINT_H_
#define ZSP_NN_CHECKPOINT_H_

#include <string>
#include <utility>
#include <vector>

#include "zsp/nn/params.h"

namespace zsp::nn {

// Binary container, little-endian:
//   "ZSPCKPT\0"  u32 version  str kind  str config-json  u32 tensor-count
//   per tensor: str name  u32 rows  u32 cols  f64[rows*cols] column-major
// where str is a u32 byte length followed by the bytes.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  std::string kind;
  std::string config;
  std::vector<std::pair<std::string, Mat>> tensors;
};

void writeCheckpoint(const std::string& path, const std::string& kind,
                     const std::string& config, const ParamStore& store);

// Throws FormatError.
Checkpoint readCheckpoint(const std::string& path);

// Copies tensors into a store with the same names and shapes. Throws
// DimMismatch.
void loadParams(const Checkpoint& ckpt, ParamStore& store);

}  // namespace zsp::nn

#endif  // ZSP_NN_CHECKPOINT_H_
