#pragma once

#include <stdexcept>

namespace bodycomp {

// Base class for all recoverable failures reported by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable, malformed, or unsupported files.
class IoError : public Error {
 public:
  using Error::Error;
};

// Two grids that must share dims/spacing/origin do not.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values or config-file syntax.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A segmentation step could not produce a valid result.
class PipelineError : public Error {
 public:
  using Error::Error;
};

}  // namespace bodycomp
