#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smartpaste {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the derived types carry the machine-readable kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeOutOfBounds : public Error {
 public:
  using Error::Error;
};

class InvalidText : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace smartpaste
