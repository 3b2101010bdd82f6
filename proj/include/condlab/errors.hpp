#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace condlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested computation is not available for this norm or mode.
class NotSupported : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured work budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotABasis : public Error {
 public:
  using Error::Error;
};

/// Floating-point solver failed to converge.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature hit its refinement limit. Carries the last bracket
/// and the two most recent estimates.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double t_min, double t_max,
                    double last, double previous)
      : Error(what), t_min(t_min), t_max(t_max), last(last),
        previous(previous) {}

  double t_min;
  double t_max;
  double last;
  double previous;
};

/// Malformed input text. Line and column are 1-based; zero means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::size_t column = 0)
      : Error(format(what, line, column)), line(line), column(column) {}

  std::size_t line;
  std::size_t column;

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + what;
  }
};

}  // namespace condlab
