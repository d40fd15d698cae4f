#pragma once

#include <stdexcept>
#include <string>

namespace slog {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shapes of operands do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied value is outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Filter frequency response vanishes (or nearly so) at some graph frequency.
class NonInvertibleFilter : public Error {
 public:
  using Error::Error;
};

// Random graph generation failed to produce a connected graph.
class ConnectivityFailure : public Error {
 public:
  using Error::Error;
};

// File, directory, or serialization problems.
class IoError : public Error {
 public:
  using Error::Error;
};

// Persisted artifact carries an unknown format_version.
class VersionMismatch : public IoError {
 public:
  using IoError::IoError;
};

// Payload file size disagrees with the dimensions in the manifest.
class CorruptPayload : public IoError {
 public:
  using IoError::IoError;
};

// Training loss became non-finite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A backward pass was asked to use a trace recorded for different parameters.
class StaleTrace : public Error {
 public:
  using Error::Error;
};

}  // namespace slog
