#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace form {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A speed reached or exceeded c. Never clamped: upstream integrator or unit bug.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Co-moving frame requested at (near) zero velocity.
class DegenerateVelocityError : public Error {
 public:
  using Error::Error;
};

/// Time or index outside the admissible interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions that do not chain.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// NaN or infinity in a state, loss or output.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (files, configs, empty sets).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content; `line` is 1-based (0 when not line-oriented).
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Wraps a failure raised while simulating one trajectory of a dataset.
class SimulationError : public Error {
 public:
  SimulationError(std::size_t index, const std::string& what)
      : Error("trajectory " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace form
