#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmc {

// Error classes shared by every module. Each failure mode named by the
// public contracts maps to exactly one code.
enum class ErrorCode {
  kInvalidArgument,
  kFormat,
  kTruncation,
  kUnsupportedCodec,
  kWrongCodebook,
  kTrailingGarbage,
  kParse,
  kPlacement,
  kNoObjects,
  kTooManyObjects,
  kAmbiguousScene,
  kInsufficientSamples,
  kNumerical,
  kConfiguration,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Caption grammar and placement failures. `offset` is the byte offset of
// the offending token in the input text.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t offset, const std::string& message);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace cmc
