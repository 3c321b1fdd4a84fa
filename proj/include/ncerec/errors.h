#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncerec {

// Operand shapes do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cholesky met a non-positive pivot. Usually means lambda is too small
// or the input carries NaN/Inf.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  NotPositiveDefiniteError(std::size_t pivot, double value);
  std::size_t pivot() const { return pivot_; }
  double value() const { return value_; }

 private:
  std::size_t pivot_;
  double value_;
};

// Input data (ratings files, split files, model files) could not be parsed.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  FormatError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Model file magic or version does not match this build.
class IncompatibleModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation is not defined for the given model kind (e.g. cold-start on NCE-SVD).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ncerec
