#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lieorder {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t position)
      : ParseError("unknown identifier '" + name + "'", position), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Raised while evaluating an expression numerically.
class EvalError : public Error {
 public:
  using Error::Error;
};

class MissingBindingError : public EvalError {
 public:
  explicit MissingBindingError(const std::string& name)
      : EvalError("no binding for variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DivisionByZeroError : public EvalError {
 public:
  explicit DivisionByZeroError(const std::string& subexpression)
      : EvalError("division by zero in '" + subexpression + "'"), subexpression_(subexpression) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

/// A probabilistic zero test could not evaluate the expression at any sample.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid simulation or command options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Structural problems in a system document; `location` is a JSON-pointer-like path.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& message, std::string location)
      : Error(location + ": " + message), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

}  // namespace lieorder
