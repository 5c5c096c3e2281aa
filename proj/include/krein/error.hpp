#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace krein {

enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  NotHermitian,
  NoConvergence,
  NotPSD,
  NotSymmetry,
  NotSelfadjoint,
  NotInvertible,
  IllConditioned,
  NotCongruent,
  NotDirect,
  PreconditionFailed,
  NotSemidefinite,
  DegenerateProjection,
  Incompatible,
  ContractionOverflow,
  NotContraction,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotSymmetry: return "NotSymmetry";
    case ErrorKind::NotSelfadjoint: return "NotSelfadjoint";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotCongruent: return "NotCongruent";
    case ErrorKind::NotDirect: return "NotDirect";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotSemidefinite: return "NotSemidefinite";
    case ErrorKind::DegenerateProjection: return "DegenerateProjection";
    case ErrorKind::Incompatible: return "Incompatible";
    case ErrorKind::ContractionOverflow: return "ContractionOverflow";
    case ErrorKind::NotContraction: return "NotContraction";
  }
  return "Unknown";
}

/// Input and numerical-validation errors are separated from violations of
/// mathematical hypotheses so front ends can map them to distinct exit codes.
constexpr bool is_math_precondition(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NoConvergence:
      return false;
    default:
      return true;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace krein
