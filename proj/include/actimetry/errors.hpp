#pragma once

#include <stdexcept>
#include <string>

namespace actimetry {

// All library failures derive from Error so callers can catch one type and
// still branch on the concrete category when they need to.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input data (non-finite samples, bad CSV rows).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its documented range (delta > N, bad bin width, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The series carries no usable variation (zero variance, empty partition).
class DegenerateSeries : public Error {
 public:
  using Error::Error;
};

/// Nothing left to analyse after exclusion or filtering.
class EmptyData : public Error {
 public:
  using Error::Error;
};

/// Recording too short for the requested analysis.
class DurationError : public Error {
 public:
  using Error::Error;
};

/// DFA: some F(S) is exactly zero.
class DegenerateFluctuation : public Error {
 public:
  using Error::Error;
};

/// DFA: fewer than three scales survive the N/2 ceiling.
class InsufficientScales : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace actimetry
