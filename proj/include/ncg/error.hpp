#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncg {

/// Failure categories raised by the toolkit. The names are part of the
/// machine-readable error output of the command-line tool.
enum class ErrorCode {
  NonHermitianInput,
  NotUnitary,
  NotAProjector,
  SpectrumInGap,
  RegionMismatch,
  GeometryMismatch,
  FluxIncommensurate,
  DegenerateGap,
  DegreeMismatch,
  NonCommutingGenerators,
  NotInvariant,
  GridTooCoarse,
  NonHermitianLift,
  NonUnitaryLift,
  LiftMismatch,
  HomotopyStepTooLarge,
  PathStepTooLarge,
  NoGapAtMu,
  WindowNotInGap,
  MissingKey,
  BadValue,
  InvalidArgument,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotAProjector: return "NotAProjector";
    case ErrorCode::SpectrumInGap: return "SpectrumInGap";
    case ErrorCode::RegionMismatch: return "RegionMismatch";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::FluxIncommensurate: return "FluxIncommensurate";
    case ErrorCode::DegenerateGap: return "DegenerateGap";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::NonCommutingGenerators: return "NonCommutingGenerators";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NonHermitianLift: return "NonHermitianLift";
    case ErrorCode::NonUnitaryLift: return "NonUnitaryLift";
    case ErrorCode::LiftMismatch: return "LiftMismatch";
    case ErrorCode::HomotopyStepTooLarge: return "HomotopyStepTooLarge";
    case ErrorCode::PathStepTooLarge: return "PathStepTooLarge";
    case ErrorCode::NoGapAtMu: return "NoGapAtMu";
    case ErrorCode::WindowNotInGap: return "WindowNotInGap";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ncg
