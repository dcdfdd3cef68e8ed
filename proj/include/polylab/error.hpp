// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace polylab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or parameters that can never be valid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// A point or level outside the domain of the object being queried.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A request the implementation deliberately does not support (dimension caps etc).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// A computed quantity failed its own quality check.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace polylab
