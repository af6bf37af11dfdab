#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aimg {

enum class ErrorKind {
  ModulusMismatch,
  NotInvertible,
  NotADivisor,
  IncompatibleResidues,
  NotASubgroup,
  NotAbelian,
  NotNormal,
  ResourceExceeded,
  NotAHomomorphism,
  NotEligible,
  NoDecomposition,
  DegreeMismatch,
  MissingParameter,
  DegenerateSubstitution,
  ZeroInput,
  DegenerateQuartic,
  UnsupportedShape,
  DegenerateRadicand,
  NonIntegralGenus,
  SchemaError,
  InvariantViolation,
  NoMatch,
  MissingAutomorphismData,
  UnknownLabel,
  ParseError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ModulusMismatch: return "ModulusMismatch";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotADivisor: return "NotADivisor";
    case ErrorKind::IncompatibleResidues: return "IncompatibleResidues";
    case ErrorKind::NotASubgroup: return "NotASubgroup";
    case ErrorKind::NotAbelian: return "NotAbelian";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::ResourceExceeded: return "ResourceExceeded";
    case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorKind::NotEligible: return "NotEligible";
    case ErrorKind::NoDecomposition: return "NoDecomposition";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::MissingParameter: return "MissingParameter";
    case ErrorKind::DegenerateSubstitution: return "DegenerateSubstitution";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::DegenerateQuartic: return "DegenerateQuartic";
    case ErrorKind::UnsupportedShape: return "UnsupportedShape";
    case ErrorKind::DegenerateRadicand: return "DegenerateRadicand";
    case ErrorKind::NonIntegralGenus: return "NonIntegralGenus";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NoMatch: return "NoMatch";
    case ErrorKind::MissingAutomorphismData: return "MissingAutomorphismData";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace aimg
