#include "cmc/error.h"

namespace cmc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kTruncation: return "truncation";
    case ErrorCode::kUnsupportedCodec: return "unsupported-codec";
    case ErrorCode::kWrongCodebook: return "wrong-codebook";
    case ErrorCode::kTrailingGarbage: return "trailing-garbage";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kPlacement: return "placement";
    case ErrorCode::kNoObjects: return "no-objects";
    case ErrorCode::kTooManyObjects: return "too-many-objects";
    case ErrorCode::kAmbiguousScene: return "ambiguous-scene";
    case ErrorCode::kInsufficientSamples: return "insufficient-samples";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + " error: " + message),
      code_(code) {}

ParseError::ParseError(ErrorCode code, std::size_t offset,
                       const std::string& message)
    : Error(code, message + " at offset " + std::to_string(offset)),
      offset_(offset) {}

}  // namespace cmc
