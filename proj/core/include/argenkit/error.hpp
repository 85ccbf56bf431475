#pragma once

#include <stdexcept>
#include <string>

namespace argenkit {

// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller handed in an argument or config that violates a documented
// precondition (rate outside [0,1], bad threshold, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input data could not be read or parsed (missing file, ragged parallel
// files, malformed JSONL, unknown token id, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace argenkit
