#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace betula {

/// Raised for malformed arguments: dimension mismatches, non-finite
/// coordinates, out-of-range parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A criterion evaluated where it has no value, e.g. the diameter of a
/// cluster with total weight <= 1.
class UndefinedCriterion : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace betula
