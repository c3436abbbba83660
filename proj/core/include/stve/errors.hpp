#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stve {

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot produce a meaningful result: a singular
/// moment system, a diverging recursion, a failed eigensolver.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based; 0 when the location is unknown.
class ParseError : public IoError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : IoError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace stve
