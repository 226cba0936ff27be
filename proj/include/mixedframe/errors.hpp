#pragma once

#include <stdexcept>
#include <string>

namespace mixedframe {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Weights or densities that do not sum/integrate to one.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or matrix-function routines that failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Inputs outside the range where the discretization is valid.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Size caps (term counts, dense-matrix dimensions).
class ResourceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mixedframe
