#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circlift {

enum class ErrorCode {
  NotPrime,
  NotOddPrime,
  ZeroInverse,
  EmptyInput,
  DimensionOutOfRange,
  DimensionMismatch,
  InvalidSimplex,
  NoDualCycle,
  EmptyDiagram,
  NotClosed,
  Unliftable,
  ComplexTooLargeForSnf,
  TorsionObstruction,
  NotACocycle,
  ZeroPairing,
  NotDivisible,
  ValidationFailed,
  SolverDiverged,
  InconsistentCocycle,
  VertexSetMismatch,
  DegenerateData,
  FormatError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NotOddPrime: return "NotOddPrime";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DimensionOutOfRange: return "DimensionOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidSimplex: return "InvalidSimplex";
    case ErrorCode::NoDualCycle: return "NoDualCycle";
    case ErrorCode::EmptyDiagram: return "EmptyDiagram";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::Unliftable: return "Unliftable";
    case ErrorCode::ComplexTooLargeForSnf: return "ComplexTooLargeForSnf";
    case ErrorCode::TorsionObstruction: return "TorsionObstruction";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::ZeroPairing: return "ZeroPairing";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::InconsistentCocycle: return "InconsistentCocycle";
    case ErrorCode::VertexSetMismatch: return "VertexSetMismatch";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::FormatError: return "FormatError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code so the
/// CLI can map it to an exit status and a JSON diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace circlift
