#pragma once

#include <stdexcept>
#include <string>

namespace arconv {

// Error taxonomy shared by the whole library. The CLI maps these onto
// process exit codes, so every failure path should throw one of them
// rather than a bare std::exception.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor extents do not line up (rank, axis length, channel count).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A value-level precondition failed (bad kernel size, invalid range, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf reached a place that requires finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A serialized artifact (checkpoint, CSV, image file) is malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Image preprocessing could not produce a usable result.
class PreprocessError : public Error {
 public:
  using Error::Error;
};

// Filesystem/stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace arconv
