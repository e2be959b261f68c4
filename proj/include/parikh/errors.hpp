#ifndef PARIKH_ERRORS_HPP
#define PARIKH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parikh {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed grammar/formula/graph text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed input that violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A bounded search hit its configured cap before finishing.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace parikh

#endif  // PARIKH_ERRORS_HPP
