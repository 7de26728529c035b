#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rcplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or missing configuration (unknown key, bad value, unmapped column).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `row()` is the 1-based line number (header is line 1),
/// or 0 when the problem is not tied to a line.
class IngestionError : public Error {
 public:
  IngestionError(const std::string& what, std::size_t row)
      : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// A series does not cover the requested alignment window.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// A daylight-saving transition falls inside an alignment window.
class DaylightSavingError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDownsamplingError : public Error {
 public:
  using Error::Error;
};

/// History shorter than the configured calibration window.
class InsufficientHistoryError : public Error {
 public:
  using Error::Error;
};

/// Division by a (near) zero quantity: zero power range, zero baseline, ...
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// The thermal state became non-finite while integrating.
class NumericalBlowupError : public Error {
 public:
  NumericalBlowupError(const std::string& what, std::size_t step_index)
      : Error(what), step_index_(step_index) {}
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

}  // namespace rcplan
