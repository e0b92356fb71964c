#pragma once

#include <stdexcept>
#include <string>

namespace polydens {

enum class ErrorKind {
  NearSingular,
  SingularTranslate,
  DegenerateSample,
  DegenerateRestriction,
  UnsupportedQuadric,
  InsufficientData,
  DimensionMismatch,
  Overflow,
  BallTooLarge,
  DegenerateHeuristic,
  EmptyDatum,
  InvalidP,
  NonpositiveDenominator,
  InvalidArgument,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NearSingular: return "NearSingular";
    case ErrorKind::SingularTranslate: return "SingularTranslate";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::DegenerateRestriction: return "DegenerateRestriction";
    case ErrorKind::UnsupportedQuadric: return "UnsupportedQuadric";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::BallTooLarge: return "BallTooLarge";
    case ErrorKind::DegenerateHeuristic: return "DegenerateHeuristic";
    case ErrorKind::EmptyDatum: return "EmptyDatum";
    case ErrorKind::InvalidP: return "InvalidP";
    case ErrorKind::NonpositiveDenominator: return "NonpositiveDenominator";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace polydens
