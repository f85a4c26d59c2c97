#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bayesdl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch, non-square or non-symmetric input, wrong arity.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its documented domain (probability not in [0,1], K out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A linear system that could not be factorized (singular / not positive definite).
class ConditioningError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}
  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

/// Data whose content does not match the format an operation requires (non one-hot labels, ...).
class InputFormatError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGradientError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ColumnTypeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bayesdl
