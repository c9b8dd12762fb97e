#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gci {

// Malformed input data (files, JSON, encodings). CLI exit code 65.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation is well-formed but not applicable in this context. CLI exit code 66.
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configurable resource cap was hit; the answer is indeterminate, not negative.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public FormatError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : FormatError(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace gci
