#ifndef NCPA_ERRORS_HPP_
#define NCPA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ncpa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller-side mistakes: malformed inputs, dimension mismatches, off-simplex
// weights. The CLI maps these to exit code 2.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Numerical failures on well-formed input. The CLI maps these to exit code 1.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public NumericError {
 public:
  using NumericError::NumericError;
};

class GridTooSmall : public NumericError {
 public:
  using NumericError::NumericError;
};

class ImproperOnGrid : public NumericError {
 public:
  using NumericError::NumericError;
};

class GradientUndefined : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace ncpa

#endif  // NCPA_ERRORS_HPP_
