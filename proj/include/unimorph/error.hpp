#pragma once

#include <stdexcept>
#include <string>

namespace unimorph {

// Every failure mode the library reports deliberately. Anything not listed
// here escaping a public entry point is a bug.
enum class ErrorCode {
  DegenerateTriangle,
  BadWeights,
  NotSimple,
  EmptyRegion,
  BoundaryVertex,
  KernelViolation,
  MultiEdge,
  DegreeTooHigh,
  TopologyMismatch,
  InvalidEndpoint,
  NonPositive,
  DegenerateWedge,
  EmptyNiceSet,
  NoIntersection,
  ReinsertionFailure,
  OrientationReversed,
  Misclassified,
  NoFeasibleParameter,
  TargetSelectionExhausted,
  Unhandled,
  ParseError,
};

inline const char* errorCodeName(ErrorCode c) {
  switch (c) {
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::BoundaryVertex: return "BoundaryVertex";
    case ErrorCode::KernelViolation: return "KernelViolation";
    case ErrorCode::MultiEdge: return "MultiEdge";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::TopologyMismatch: return "TopologyMismatch";
    case ErrorCode::InvalidEndpoint: return "InvalidEndpoint";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::DegenerateWedge: return "DegenerateWedge";
    case ErrorCode::EmptyNiceSet: return "EmptyNiceSet";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::ReinsertionFailure: return "ReinsertionFailure";
    case ErrorCode::OrientationReversed: return "OrientationReversed";
    case ErrorCode::Misclassified: return "Misclassified";
    case ErrorCode::NoFeasibleParameter: return "NoFeasibleParameter";
    case ErrorCode::TargetSelectionExhausted: return "TargetSelectionExhausted";
    case ErrorCode::Unhandled: return "Unhandled";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace unimorph
