#pragma once

#include <stdexcept>
#include <string>

namespace metricforge {

// One code per diagnosable failure. The CLI maps every Error to exit code 2;
// a *violated* inequality is not an Error but a report with a witness.
enum class ErrorCode {
  NonSquare,
  AsymmetricEntry,
  NegativeEntry,
  NonFiniteEntry,
  NonzeroDiagonal,
  ZeroOffDiagonal,
  IndexOutOfRange,
  NonPositiveAlpha,
  InvalidModulus,
  EmptyControl,
  InvalidAssignment,
  NotSurjective,
  NotNested,
  DegenerateA,
  NotQuasisymmetric,
  InvalidRatio,
  TooLargeForExhaustive,
  RepeatedIndex,
  NotAdditiveSource,
  DisconnectedGraph,
  InvalidSpec,
  ParseError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::AsymmetricEntry: return "AsymmetricEntry";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::InvalidModulus: return "InvalidModulus";
    case ErrorCode::EmptyControl: return "EmptyControl";
    case ErrorCode::InvalidAssignment: return "InvalidAssignment";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::DegenerateA: return "DegenerateA";
    case ErrorCode::NotQuasisymmetric: return "NotQuasisymmetric";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::TooLargeForExhaustive: return "TooLargeForExhaustive";
    case ErrorCode::RepeatedIndex: return "RepeatedIndex";
    case ErrorCode::NotAdditiveSource: return "NotAdditiveSource";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }

  // Raw message without the code prefix, for rewrapping with file context.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace metricforge
