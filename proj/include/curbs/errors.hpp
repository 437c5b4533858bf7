#ifndef CURBS_ERRORS_HPP
#define CURBS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curbs {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vectors or matrices whose lengths disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented domain (empty sets,
// overlapping views, indices not in the expected set, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The data cannot support the requested computation, e.g. a zero bandwidth.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

// A user-facing parameter is out of range (J, reps, sizes, model id).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed CSV / JSON input.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace curbs

#endif  // CURBS_ERRORS_HPP
