#pragma once

#include <stdexcept>
#include <string>

namespace ecf {

/// Argument outside the mathematical domain of an operation (e.g. p not in (0,1)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation that is well posed but failed numerically: vanishing
/// density, quadrature that did not reach tolerance, no root in a bracket.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, or 0 when not tied to a line.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::invalid_argument(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ecf
