#pragma once

#include <stdexcept>
#include <string>

namespace msf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation outside a function's declared domain.
struct DomainError : Error {
  DomainError(const std::string& what, double r)
      : Error(what + " (at r = " + std::to_string(r) + ")"), r(r) {}
  double r;
};

/// A non-finite value appeared where the algebra requires a finite one.
struct EvalError : Error {
  EvalError(const std::string& what, double r)
      : Error(what + " (at r = " + std::to_string(r) + ")"), r(r) {}
  double r;
};

struct QuadratureError : Error {
  using Error::Error;
};

/// Structural misuse: axis mismatch, order cap, uncertified reciprocal, ...
struct AlgebraError : Error {
  using Error::Error;
};

/// Deformation constant inside the excluded band.
struct AdmissibilityError : Error {
  AdmissibilityError(const std::string& what, double excluded_lo, double excluded_hi)
      : Error(what), excluded_lo(excluded_lo), excluded_hi(excluded_hi) {}
  double excluded_lo, excluded_hi;
};

struct SolverError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace msf
