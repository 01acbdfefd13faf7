#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aspemb {

// Base for every failure the library reports. The CLI maps these to exit 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input text; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, std::size_t line, const std::string& what)
      : Error(where + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Structurally valid input that violates a record or catalog contract.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Matrix/vector dimension mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on an object in the wrong state (e.g. predict before fit).
class StateError : public Error {
 public:
  using Error::Error;
};

// Mathematically undefined result (zero vector, zero variance, no known words).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace aspemb
