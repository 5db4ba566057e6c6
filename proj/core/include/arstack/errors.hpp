#pragma once

#include <stdexcept>
#include <string>

namespace arstack {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category, e.g. "invalid-argument".
  virtual const char* kind() const noexcept { return "error"; }
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid-argument"; }
};

/// Input data is malformed (non-finite samples, bad CSV rows, ...).
class InvalidData : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid-data"; }
};

/// A file could not be read or failed validation on load.
class LoadError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "load"; }
};

/// The input carries no information to act on (e.g. a constant difference image).
class DegenerateInput : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate-input"; }
};

/// Writing an output artifact failed.
class WriteError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "write"; }
};

}  // namespace arstack
