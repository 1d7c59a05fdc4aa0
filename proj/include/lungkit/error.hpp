#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lungkit {

enum class ErrorCode {
  InvalidArgument,
  MissingHeaderKey,
  InvalidHeader,
  UnsupportedElementType,
  CompressedDataUnsupported,
  SizeMismatch,
  RangeOverflow,
  IoFailure,
  GeometryMismatch,
  EmptyMask,
  SeedOutsideLung,
  DegenerateHistogram,
  NonConcaveFit,
  BothEmpty,
  LengthMismatch,
  ConstantInput,
  TooFewPoints,
  UnknownConfigKey,
  MalformedInput,
};

/// Machine-parseable prefix printed by the CLI, e.g. "E_GEOMETRY".
std::string_view error_tag(ErrorCode code);

/// Process exit status for a failure of this kind: 2 usage, 3 data, 4 numeric.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Non-fatal diagnostics go to std::clog with a "warning: " prefix.
void warn(std::string_view message);

}  // namespace lungkit
