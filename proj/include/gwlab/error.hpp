#pragma once

#include <stdexcept>
#include <string>

namespace gwlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid law, model, configuration or argument.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Population counter left the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Iterative procedure (quadrature, pgf product) did not converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive computation would exceed its configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace gwlab
