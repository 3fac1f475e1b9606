#pragma once

#include <stdexcept>
#include <string>

namespace smt {

enum class ErrorCode {
  OutOfRange,
  MassMismatch,
  NegativeMass,
  ShadowInfeasible,
  NotInConvexDecreasingOrder,
  DecompositionError,
  SolverError,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::MassMismatch: return "MassMismatch";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::ShadowInfeasible: return "ShadowInfeasible";
    case ErrorCode::NotInConvexDecreasingOrder: return "NotInConvexDecreasingOrder";
    case ErrorCode::DecompositionError: return "DecompositionError";
    case ErrorCode::SolverError: return "SolverError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the shadow of a Dirac when bary(theta_0) > x; carries that slack.
class ShadowInfeasibleError : public Error {
 public:
  ShadowInfeasibleError(double slack, const std::string& what)
      : Error(ErrorCode::ShadowInfeasible, what), slack_(slack) {}

  double slack() const noexcept { return slack_; }

 private:
  double slack_;
};

// Raised when mu <=cd nu fails; `point` is a location where p_mu(t) > p_nu(t)
// (or the barycenter / mass condition that failed, see what()).
class OrderViolationError : public Error {
 public:
  OrderViolationError(double point, const std::string& what)
      : Error(ErrorCode::NotInConvexDecreasingOrder, what), point_(point) {}

  double point() const noexcept { return point_; }

 private:
  double point_;
};

}  // namespace smt
