#pragma once

#include <stdexcept>
#include <string>

namespace zenoest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter is outside its allowed domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Propagation or another numerical routine produced an unusable result.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A Markov chain has more than one stationary distribution.
class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& what, int eigenspace_dimension)
      : Error(what), eigenspace_dimension_(eigenspace_dimension) {}

  int eigenspace_dimension() const noexcept { return eigenspace_dimension_; }

 private:
  int eigenspace_dimension_;
};

/// Fisher information diverges (an outcome with vanishing probability
/// depends on the parameter).
class DivergentInformation : public Error {
 public:
  using Error::Error;
};

/// No closed form is available for the requested parameter combination.
class UnsupportedClosedForm : public Error {
 public:
  using Error::Error;
};

/// A short-time expansion was requested outside its validity range.
class OutOfRegime : public Error {
 public:
  using Error::Error;
};

/// Every candidate assigns zero likelihood to the observed record.
class ImpossibleRecord : public Error {
 public:
  using Error::Error;
};

}  // namespace zenoest
