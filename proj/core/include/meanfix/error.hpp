#pragma once

#include <stdexcept>
#include <string>

namespace meanfix {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or configuration value outside its admissible range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised by the solver when an iterate picks up NaN or Inf.
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

} // namespace meanfix
