#ifndef ZSP_ERRORS_H_
#define ZSP_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zsp {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed logical-form text or token sequence. `offset` is a character
// offset for text input and a token index for token input.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error("syntax error at " + std::to_string(offset) + ": " + message),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Invalid input file content. `line` is 1-based, 0 when not applicable.
class FormatError : public Error {
 public:
  FormatError(const std::string& source, std::size_t line,
              const std::string& message)
      : Error(source + (line ? ":" + std::to_string(line) : "") + ": " +
              message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnknownConstant : public Error {
 public:
  explicit UnknownConstant(const std::string& id)
      : Error("unknown constant '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class EmptyCandidates : public Error {
 public:
  EmptyCandidates(std::size_t slot, const std::string& category)
      : Error("no candidates for slot " + std::to_string(slot) + " (" +
              category + ")"),
        slot_(slot) {}
  std::size_t slot() const { return slot_; }

 private:
  std::size_t slot_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class EmptyTrainingSet : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

class UnknownToken : public Error {
 public:
  explicit UnknownToken(const std::string& token)
      : Error("token not in model vocabulary: '" + token + "'") {}
};

class AllOov : public Error {
 public:
  explicit AllOov(const std::string& phrase)
      : Error("no word of '" + phrase + "' has an embedding") {}
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class NoCandidateOfType : public Error {
 public:
  using Error::Error;
};

}  // namespace zsp

#endif  // ZSP_ERRORS_H_
