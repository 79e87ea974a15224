#pragma once

#include <stdexcept>
#include <string>

namespace roadsafe {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or structurally invalid input stream.
class IngestError : public Error {
 public:
  using Error::Error;
};

// A query point lies outside the domain of the data (no extrapolation).
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace roadsafe
