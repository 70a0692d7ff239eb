#pragma once

#include <stdexcept>
#include <string>

namespace fnp {

// Base of every error the library raises. The C API maps the concrete type
// to an fnp_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: parse failures, non-finite cells, incomplete designs,
// duplicate labels.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The experiment cannot be analysed with the supported procedure
// (k < 3, N < 2, k outside the q table, degenerate Iman-Davenport form).
class UnsupportedDesignError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Quadrature or root finding failed to reach the requested tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved_tolerance)
      : Error(what), achieved_tolerance_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

}  // namespace fnp
