#pragma once

#include <stdexcept>
#include <string>

namespace css {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad argument, bad config).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration or command-line input.
class ConfigError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A field or point sits too close to the computational boundary.
class MarginError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Peak coordinates left the admissible box D_delta.
class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// An iterative solver failed to converge or broke down.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// File parsing or writing failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace css
