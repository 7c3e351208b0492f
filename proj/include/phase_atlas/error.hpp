#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phase_atlas {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised by the expression and fixture readers. Line and column are 1-based.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

class DivisionByZero : public Error {
  public:
    using Error::Error;
};

class ContextMismatch : public Error {
  public:
    using Error::Error;
};

/// A symbolic identity the toolkit is supposed to certify did not hold.
class VerificationError : public Error {
  public:
    using Error::Error;
};

class IntegrationError : public Error {
  public:
    using Error::Error;
};

} // namespace phase_atlas
