#pragma once

#include <stdexcept>
#include <string>

namespace contrast {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: wrong lengths, non-finite values, empty inputs, duplicate ids.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Operation not allowed in the current state (e.g. stepping a terminal sim).
class InvalidState : public Error {
 public:
  using Error::Error;
};

class InvalidToken : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or unresolvable names. Maps to CLI exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable, corrupt or wrong-version trajectory files.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace contrast
