#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oscint {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a bound is not met, so the requested check refuses to run.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class EigenError : public Error {
 public:
  EigenError(const std::string& what, double off_diagonal_residual)
      : Error(what), residual_(off_diagonal_residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Non-finite state encountered while stepping.
class NumericalBlowup : public Error {
 public:
  NumericalBlowup(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace oscint
