#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lndkit {

/// Context mismatches, unknown variables, malformed specs.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mathematically invalid inputs (gcd(0, 0), a non-slice passed as a slice, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation's documented precondition does not hold.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or reference error with a 1-based source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace lndkit
