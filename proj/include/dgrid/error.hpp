#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dgrid {

// Every error thrown by the library derives from one of three families.
// The CLI maps them to exit codes 1, 2 and 3 respectively.

class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- usage / parameter family (exit 2) ---

class DomainError : public UsageError {
 public:
  using UsageError::UsageError;
};

class ParameterError : public UsageError {
 public:
  using UsageError::UsageError;
};

class SchemeError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Exhaustive routine refused an instance beyond its enumeration bound.
class TooLargeError : public UsageError {
 public:
  using UsageError::UsageError;
};

class ReferenceError : public UsageError {
 public:
  using UsageError::UsageError;
};

// --- runtime family (exit 1) ---

class InsufficientSharesError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class InconsistencyError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class IncompletenessError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class IntegrityError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class UnreachableError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class InfeasibleError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class PlacementError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class AuthorizationError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class UnavailableError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

// --- format / parse family (exit 3) ---

/// Malformed binary share. `field()` names the offending header field.
class FormatError : public FormatFailure {
 public:
  FormatError(std::string field, const std::string& what)
      : FormatFailure(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Text document error carrying the 1-based line it was found on.
class ParseError : public FormatFailure {
 public:
  ParseError(std::size_t line, const std::string& what)
      : FormatFailure("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Syntactically valid text that references something undeclared or
/// redeclares an id.
class SemanticError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace dgrid
