#pragma once

#include <stdexcept>
#include <string>

namespace kplab {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI diagnostics line.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept = 0;
};

/// Violated preconditions and invalid inputs (CLI exit code 1).
class ContractError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ContractError"; }
};

/// Numerical breakdowns: blow-up, failed convergence (CLI exit code 2).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File system and format errors (CLI exit code 3).
class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "IoError"; }
};

#define KPLAB_CONTRACT_ERROR(Name)                                \
  class Name : public ContractError {                             \
   public:                                                        \
    using ContractError::ContractError;                           \
    const char* kind() const noexcept override { return #Name; }  \
  }

KPLAB_CONTRACT_ERROR(InvalidGrid);
KPLAB_CONTRACT_ERROR(InvalidArgument);
KPLAB_CONTRACT_ERROR(SymmetryViolation);
KPLAB_CONTRACT_ERROR(ConstraintViolation);
KPLAB_CONTRACT_ERROR(DomainError);
KPLAB_CONTRACT_ERROR(GridIncompatible);
KPLAB_CONTRACT_ERROR(DomainTooSmall);
KPLAB_CONTRACT_ERROR(HyperplaneViolation);
KPLAB_CONTRACT_ERROR(DegenerateDerivative);

#undef KPLAB_CONTRACT_ERROR

class BlowupDetected : public NumericalError {
 public:
  BlowupDetected(const std::string& what, double t)
      : NumericalError(what), t_(t) {}
  const char* kind() const noexcept override { return "BlowupDetected"; }
  /// Simulation time at which the blow-up was detected.
  double time() const noexcept { return t_; }

 private:
  double t_;
};

class ConvergenceFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "ConvergenceFailure"; }
};

}  // namespace kplab
