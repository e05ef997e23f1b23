#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of an operation (point off the chart, bad radius).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Integrator or solver failed to meet its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Eigenbasis resolution check failed.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Search horizon exhausted. Says nothing about whether a loop exists.
class HorizonError : public Error {
 public:
  using Error::Error;
};

class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qlab
