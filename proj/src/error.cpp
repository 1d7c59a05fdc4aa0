#include "lungkit/error.hpp"

#include <iostream>

namespace lungkit {

std::string_view error_tag(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "E_USAGE";
    case ErrorCode::UnknownConfigKey: return "E_CONFIG";
    case ErrorCode::MissingHeaderKey: return "E_HEADER";
    case ErrorCode::InvalidHeader: return "E_HEADER";
    case ErrorCode::UnsupportedElementType: return "E_ELEMENT_TYPE";
    case ErrorCode::CompressedDataUnsupported: return "E_COMPRESSED";
    case ErrorCode::SizeMismatch: return "E_SIZE";
    case ErrorCode::RangeOverflow: return "E_RANGE";
    case ErrorCode::IoFailure: return "E_IO";
    case ErrorCode::GeometryMismatch: return "E_GEOMETRY";
    case ErrorCode::EmptyMask: return "E_EMPTY_MASK";
    case ErrorCode::SeedOutsideLung: return "E_SEED";
    case ErrorCode::MalformedInput: return "E_INPUT";
    case ErrorCode::DegenerateHistogram: return "E_DEGENERATE_FIT";
    case ErrorCode::NonConcaveFit: return "E_NONCONCAVE_FIT";
    case ErrorCode::BothEmpty: return "E_BOTH_EMPTY";
    case ErrorCode::LengthMismatch: return "E_LENGTH";
    case ErrorCode::ConstantInput: return "E_CONSTANT_INPUT";
    case ErrorCode::TooFewPoints: return "E_TOO_FEW_POINTS";
  }
  return "E_UNKNOWN";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnknownConfigKey:
      return 2;
    case ErrorCode::DegenerateHistogram:
    case ErrorCode::NonConcaveFit:
    case ErrorCode::BothEmpty:
    case ErrorCode::ConstantInput:
    case ErrorCode::TooFewPoints:
      return 4;
    default:
      return 3;
  }
}

void warn(std::string_view message) { std::clog << "warning: " << message << '\n'; }

}  // namespace lungkit
