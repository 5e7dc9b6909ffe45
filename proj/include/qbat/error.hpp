#pragma once

#include <stdexcept>
#include <string>

namespace qbat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or size mismatch between operands (e.g. different site counts).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An input lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a configured resource cap (dense dimension).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for this kind of operand.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or serialized input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbat
