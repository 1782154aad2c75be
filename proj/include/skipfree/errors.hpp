#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skipfree {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input problems (exit code 1 in the CLI).
struct InputError : Error {
  using Error::Error;
};

// Malformed document: missing, extra or mistyped fields.
struct SchemaError : InputError {
  using InputError::InputError;
};

// A chain that parses but breaks a model invariant.
struct ValidationError : InputError {
  ValidationError(std::size_t row, double residual, const std::string& what)
      : InputError("row " + std::to_string(row) + ": " + what), row_(row), residual_(residual) {}

  std::size_t row() const noexcept { return row_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t row_;
  double residual_;
};

struct RangeError : Error {
  using Error::Error;
};

// Numerical failures (exit code 2 in the CLI).
struct NumericalError : Error {
  using Error::Error;
};

struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};

struct PoleError : NumericalError {
  using NumericalError::NumericalError;
};

struct TailError : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateSpectrumError : NumericalError {
  using NumericalError::NumericalError;
};

struct SingularSystemError : NumericalError {
  using NumericalError::NumericalError;
};

struct RunawayPathError : NumericalError {
  using NumericalError::NumericalError;
};

struct SupportMismatchError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace skipfree
