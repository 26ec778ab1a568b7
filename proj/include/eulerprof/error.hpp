#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eulerprof {

enum class ErrorKind {
  kDimensionMismatch,
  kParameter,
  kTruncation,
  kPrecondition,
  kDivergent,
  kFormat,
  kSizeRefusal,
  kBoundViolation,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kParameter: return "parameter";
    case ErrorKind::kTruncation: return "truncation";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kDivergent: return "divergent";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kSizeRefusal: return "size-refusal";
    case ErrorKind::kBoundViolation: return "bound-violation";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (and the CLI)
/// can report it without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace eulerprof
