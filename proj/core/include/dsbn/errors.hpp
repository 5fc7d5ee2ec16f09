#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsbn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: unknown variables or labels, malformed files, invalid knobs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ScopeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Conditioning or support on an empty event.
class DegenerateEventError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failure: conflict, vanishing normalizers, unsolvable equations.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ImpossibleEventError : public ConflictError {
 public:
  using ConflictError::ConflictError;
};

class NoSolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SamplingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GenerationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EmptyPopulationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A dense subset-lattice or joint-space operation exceeds its size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsbn
