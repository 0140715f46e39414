#include "zsp/nn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "zsp/errors.h"

namespace zsp::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'Z', 'S', 'P', 'C', 'K', 'P', 'T', '\0'};

void putU32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void putStr(std::ostream& out, const std::string& s) {
  putU32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
 public:
  Reader(std::istream& in, const std::string& path) : in_(in), path_(path) {}

  void bytes(char* dst, std::size_t n) {
    if (!in_.read(dst, static_cast<std::streamsize>(n))) {
      throw FormatError(path_, 0, "truncated checkpoint");
    }
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(reinterpret_cast<char*>(&v), sizeof v);
    return v;
  }
  std::string str() {
    std::uint32_t n = u32();
    if (n > (1u << 28)) throw FormatError(path_, 0, "implausible string size");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

 private:
  std::istream& in_;
  const std::string& path_;
};

}  // namespace

void writeCheckpoint(const std::string& path, const std::string& kind,
                     const std::string& config, const ParamStore& store) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(kMagic, sizeof kMagic);
  putU32(out, Checkpoint::kVersion);
  putStr(out, kind);
  putStr(out, config);
  putU32(out, static_cast<std::uint32_t>(store.all().size()));
  for (const Param& p : store.all()) {
    putStr(out, p.name);
    putU32(out, static_cast<std::uint32_t>(p.value.rows()));
    putU32(out, static_cast<std::uint32_t>(p.value.cols()));
    out.write(reinterpret_cast<const char*>(p.value.data()),
              static_cast<std::streamsize>(p.value.size() * sizeof(double)));
  }
  if (!out) throw Error("failed writing " + path);
}

Checkpoint readCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, 0, "cannot open file");
  Reader r(in, path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw FormatError(path, 0, "not a checkpoint file");
  }
  std::uint32_t version = r.u32();
  if (version != Checkpoint::kVersion) {
    throw FormatError(path, 0,
                      "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.kind = r.str();
  ckpt.config = r.str();
  std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.str();
    std::uint32_t rows = r.u32();
    std::uint32_t cols = r.u32();
    if (static_cast<std::uint64_t>(rows) * cols > (1ull << 28)) {
      throw FormatError(path, 0, "implausible tensor size for " + name);
    }
    Mat m(rows, cols);
    r.bytes(reinterpret_cast<char*>(m.data()), m.size() * sizeof(double));
    ckpt.tensors.emplace_back(std::move(name), std::move(m));
  }
  return ckpt;
}

void loadParams(const Checkpoint& ckpt, ParamStore& store) {
  if (ckpt.tensors.size() != store.all().size()) {
    throw DimMismatch("checkpoint has " + std::to_string(ckpt.tensors.size()) +
                      " tensors, model has " +
                      std::to_string(store.all().size()));
  }
  for (const auto& [name, value] : ckpt.tensors) {
    Param* p = store.find(name);
    if (!p || p->value.rows() != value.rows() ||
        p->value.cols() != value.cols()) {
      throw DimMismatch("checkpoint tensor " + name + " does not fit the model");
    }
    p->value = value;
  }
}

}  // namespace zsp::nn
