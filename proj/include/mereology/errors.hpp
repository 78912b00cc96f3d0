#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mereology {

enum class ErrorKind {
  kNotUnitary,
  kDimensionMismatch,
  kNotNormalizable,
  kNotHermitian,
  kUnsupportedForm,
  kTooFewSamples,
  kInvalidArgument,
  kParse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotUnitary: return "NotUnitary";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotNormalizable: return "NotNormalizable";
    case ErrorKind::kNotHermitian: return "NotHermitian";
    case ErrorKind::kUnsupportedForm: return "UnsupportedForm";
    case ErrorKind::kTooFewSamples: return "TooFewSamples";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace mereology
